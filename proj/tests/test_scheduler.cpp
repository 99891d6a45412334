#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "scn/load_model.hpp"
#include "scn/power_model.hpp"
#include "scn/rng.hpp"
#include "scn/scheduler.hpp"

using namespace scn;

namespace {

// Three SBSs on a line with loads 11/6, 4/3, 5/6 when all are awake.
Deployment line_fixture() {
    Deployment dep;
    dep.r_th = 50.0;
    dep.region_radius = 250.0;
    dep.sbs = {{0.0, 0.0}, {40.0, 0.0}, {80.0, 0.0}};
    dep.ue = {{-30.0, 0.0}, {20.0, 0.0}, {40.0, 0.0}, {65.0, 0.0}};
    return dep;
}

Deployment sbs_only(std::vector<Point> pts) {
    Deployment dep;
    dep.r_th = 50.0;
    dep.region_radius = 250.0;
    dep.sbs = std::move(pts);
    return dep;
}

SchedulerPolicy dlb_policy(std::optional<GammaMixtureFit> fit = std::nullopt, int max_hops = 3,
                           double kappa = 0.3) {
    SchedulerPolicy p;
    p.kind = SchedulerKind::DLB;
    p.kappa = kappa;
    p.max_hops = max_hops;
    p.load_fit = fit;
    return p;
}

} // namespace

TEST_CASE("scheduler names round-trip") {
    for (SchedulerKind k : {SchedulerKind::ROO, SchedulerKind::CLB, SchedulerKind::DLB,
                            SchedulerKind::WUC}) {
        auto back = scheduler_from_name(scheduler_name(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK(!scheduler_from_name("round-robin").has_value());
    CHECK(!scheduler_from_name("ROO").has_value());
    CHECK(!scheduler_from_name("").has_value());
}

TEST_CASE("initial sleepers: count, ordering, determinism") {
    Deployment dep = line_fixture();
    for (SchedulerKind k : {SchedulerKind::ROO, SchedulerKind::CLB, SchedulerKind::DLB,
                            SchedulerKind::WUC}) {
        RandomStream rng(11);
        CHECK(initial_sleepers(dep, 1.0, k, rng).empty());
    }
    {
        RandomStream a(42), b(42);
        auto ra = initial_sleepers(dep, 1.0 / 3.0, SchedulerKind::ROO, a);
        auto rb = initial_sleepers(dep, 1.0 / 3.0, SchedulerKind::ROO, b);
        REQUIRE(ra.size() == 2);
        CHECK(ra == rb);
        CHECK(std::is_sorted(ra.begin(), ra.end()));
    }
    {
        // round((1 - 0.5) * 3) = 2
        RandomStream rng(7);
        CHECK(initial_sleepers(dep, 0.5, SchedulerKind::WUC, rng).size() == 2);
    }
    {
        RandomStream rng(7);
        CHECK_THROWS_AS(initial_sleepers(dep, 0.0, SchedulerKind::ROO, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(initial_sleepers(dep, 1.5, SchedulerKind::ROO, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("initial sleepers: CLB and DLB take the lowest-load SBSs") {
    Deployment dep = line_fixture();
    RandomStream rng(1);
    // Loads 11/6, 4/3, 5/6: SBS 2 is lightest, then SBS 1.
    CHECK(initial_sleepers(dep, 2.0 / 3.0, SchedulerKind::CLB, rng) ==
          std::vector<std::size_t>{2});
    CHECK(initial_sleepers(dep, 1.0 / 3.0, SchedulerKind::CLB, rng) ==
          std::vector<std::size_t>{1, 2});
    CHECK(initial_sleepers(dep, 1.0 / 3.0, SchedulerKind::DLB, rng) ==
          std::vector<std::size_t>{1, 2});
}

TEST_CASE("initial sleepers: ROO choice is uniform") {
    Deployment dep = sbs_only({{0.0, 0.0}, {60.0, 0.0}, {120.0, 0.0}, {0.0, 60.0}, {0.0, 120.0}});
    const int trials = 10000;
    std::array<int, 5> hits{};
    RandomStream rng(2024);
    for (int t = 0; t < trials; ++t) {
        auto ids = initial_sleepers(dep, 0.6, SchedulerKind::ROO, rng);
        REQUIRE(ids.size() == 2);
        REQUIRE(ids[0] < ids[1]);
        for (std::size_t id : ids) hits[id]++;
    }
    // Each id is asleep with probability 2/5; 4 sigma ~ 0.0196.
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(hits[i] / double(trials) - 0.4) < 0.02);
}

TEST_CASE("roo_pick: membership and uniformity") {
    RandomStream rng(5);
    CHECK(!roo_pick({}, rng).has_value());
    CHECK(roo_pick({9}, rng) == std::optional<std::size_t>{9});

    std::vector<std::size_t> idle{3, 7, 9};
    std::array<int, 3> hits{};
    const int trials = 30000;
    for (int t = 0; t < trials; ++t) {
        auto pick = roo_pick(idle, rng);
        REQUIRE(pick.has_value());
        auto it = std::find(idle.begin(), idle.end(), *pick);
        REQUIRE(it != idle.end());
        hits[std::size_t(it - idle.begin())]++;
    }
    // 4 sigma ~ 0.0109 around 1/3.
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(hits[i] / double(trials) - 1.0 / 3.0) < 0.011);
}

TEST_CASE("clb_pick: load argmin with ties to the lowest id") {
    std::vector<double> loads{5.0, 2.0, 2.0, 1.0, 3.0};
    CHECK(clb_pick({0, 1, 2}, loads) == std::optional<std::size_t>{1});
    CHECK(clb_pick({0, 1, 2, 3}, loads) == std::optional<std::size_t>{3});
    CHECK(clb_pick({4}, loads) == std::optional<std::size_t>{4});
    CHECK(!clb_pick({}, loads).has_value());
}

TEST_CASE("dlb_pick: no-fit search expands until the next annulus is empty") {
    Deployment dep = sbs_only({{0.0, 0.0}, {30.0, 0.0}, {70.0, 0.0}, {120.0, 0.0}});
    std::vector<double> loads{0.0, 5.0, 1.0, 0.5};

    CHECK(dlb_pick(0, dep, {1, 2, 3}, loads, dlb_policy()) == std::optional<std::size_t>{3});
    CHECK(dlb_pick(0, dep, {1, 2, 3}, loads, dlb_policy(std::nullopt, 2)) ==
          std::optional<std::size_t>{2});
    CHECK(dlb_pick(0, dep, {1}, loads, dlb_policy()) == std::optional<std::size_t>{1});
    // The gap at hop 2 hides the better SBS at hop 3.
    CHECK(dlb_pick(0, dep, {1, 3}, loads, dlb_policy()) == std::optional<std::size_t>{1});
}

TEST_CASE("dlb_pick: hop cap bounds the search radius") {
    Deployment dep = sbs_only({{0.0, 0.0}, {40.0, 0.0}, {90.0, 0.0}, {140.0, 0.0}, {190.0, 0.0}});
    std::vector<double> loads{0.0, 5.0, 4.0, 3.0, 1.0};
    std::vector<std::size_t> idle{1, 2, 3, 4};
    CHECK(dlb_pick(0, dep, idle, loads, dlb_policy(std::nullopt, 3)) ==
          std::optional<std::size_t>{3});
    CHECK(dlb_pick(0, dep, idle, loads, dlb_policy(std::nullopt, 4)) ==
          std::optional<std::size_t>{4});
}

TEST_CASE("dlb_pick: an empty annulus breaks the relay even under a high cap") {
    Deployment dep = sbs_only({{0.0, 0.0}, {170.0, 0.0}});
    std::vector<double> loads{0.0, 0.1};
    CHECK(!dlb_pick(0, dep, {1}, loads, dlb_policy()).has_value());
    CHECK(!dlb_pick(0, dep, {1}, loads, dlb_policy(std::nullopt, 4)).has_value());
}

TEST_CASE("dlb_pick: coincident idle SBS belongs to hop one") {
    Deployment dep = sbs_only({{0.0, 0.0}, {0.0, 0.0}});
    std::vector<double> loads{0.0, 2.0};
    CHECK(dlb_pick(0, dep, {1}, loads, dlb_policy()) == std::optional<std::size_t>{1});
}

TEST_CASE("dlb_pick: fitted distribution gates the expansion") {
    // Continuous Gamma(4, 2) with a negligible atom; F(0.1) ~ 5e-5, F(50) ~ 1.
    GammaMixtureFit fit{4.0, 2.0, std::exp(-9.0)};
    Deployment dep = sbs_only({{0.0, 0.0}, {30.0, 0.0}, {70.0, 0.0}});

    // A hop-1 candidate this light makes a better find ahead too unlikely.
    std::vector<double> light{0.0, 0.1, 0.01};
    CHECK(dlb_should_stop(0.1, 1, 0.3, fit));
    CHECK(dlb_pick(0, dep, {1, 2}, light, dlb_policy(fit)) == std::optional<std::size_t>{1});

    // A heavy hop-1 candidate keeps the search going.
    std::vector<double> heavy{0.0, 50.0, 0.01};
    CHECK(!dlb_should_stop(50.0, 1, 0.3, fit));
    CHECK(dlb_pick(0, dep, {1, 2}, heavy, dlb_policy(fit)) == std::optional<std::size_t>{2});

    // Nothing found yet: expansion continues regardless of the fit.
    CHECK(dlb_pick(0, dep, {2}, heavy, dlb_policy(fit)) == std::optional<std::size_t>{2});
}

TEST_CASE("dlb_pick: equals a flat argmin over the searched ball (property)") {
    RandomStream rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point> pts{{0.0, 0.0}};
        const int n = 12;
        for (int i = 1; i < n; ++i) {
            double r = 200.0 * std::sqrt(rng.uniform01());
            double th = rng.uniform(0.0, 2.0 * kPi);
            pts.push_back({r * std::cos(th), r * std::sin(th)});
        }
        Deployment dep = sbs_only(pts);
        std::vector<double> loads;
        for (int i = 0; i < n; ++i) loads.push_back(rng.uniform(0.0, 10.0));
        std::vector<std::size_t> idle;
        for (int i = 1; i < n; ++i)
            if (rng.uniform01() < 0.6) idle.push_back(std::size_t(i));
        int max_hops = 1 + int(rng.index(4));
        auto got = dlb_pick(0, dep, idle, loads, dlb_policy(std::nullopt, max_hops));

        // The no-fit rule stops after the first hop whose next annulus holds
        // no idle SBS, so the searched region is the ball of k_stop hops.
        int k_stop = max_hops;
        for (int k = 1; k < max_hops; ++k) {
            std::size_t n_next = 0;
            for (std::size_t id : idle) {
                double d = dist(dep.sbs[id], dep.sbs[0]);
                if (d > k * dep.r_th && d <= (k + 1) * dep.r_th) ++n_next;
            }
            if (n_next == 0) {
                k_stop = k;
                break;
            }
        }
        std::optional<std::size_t> want;
        for (std::size_t id : idle) {
            if (dist(dep.sbs[id], dep.sbs[0]) > k_stop * dep.r_th) continue;
            if (!want || loads[id] < loads[*want]) want = id;
        }
        CHECK(got == want);
    }
}

TEST_CASE("wuc_candidate: eligibility filters and nearest choice") {
    PowerProfile profile;
    Deployment dep = sbs_only({{20.0, 0.0}, {-10.0, 0.0}, {30.0, 0.0}, {5.0, 0.0}, {45.0, 0.0}});
    std::vector<SbsState> states(5);
    states[0].mode = SbsMode::Sleep;
    states[1].mode = SbsMode::Off;
    states[2].mode = SbsMode::Standby;
    states[3].mode = SbsMode::Active;
    states[4].mode = SbsMode::Sleep;
    states[4].reserved = true;
    Point ue{0.0, 0.0};
    double now = 100.0;

    // All boots fit in 60 s; the reserved and the active SBS are out.
    CHECK(wuc_candidate(ue, dep, states, now, now + 60.0, profile) ==
          std::optional<std::size_t>{1});
    // 20 s excludes Off (30 s boot); nearest of the rest is the Sleep at 20 m.
    CHECK(wuc_candidate(ue, dep, states, now, now + 20.0, profile) ==
          std::optional<std::size_t>{0});
    // Boot may land exactly on the deadline.
    CHECK(wuc_candidate(ue, dep, states, now, now + 10.0, profile) ==
          std::optional<std::size_t>{0});
    // 0.4 s is shorter than every boot.
    CHECK(!wuc_candidate(ue, dep, states, now, now + 0.4, profile).has_value());
}

TEST_CASE("wuc_candidate: range boundary and id ties") {
    PowerProfile profile;
    {
        Deployment dep = sbs_only({{51.0, 0.0}});
        std::vector<SbsState> states(1);
        states[0].mode = SbsMode::Sleep;
        CHECK(!wuc_candidate({0.0, 0.0}, dep, states, 0.0, 60.0, profile).has_value());
        dep.sbs[0] = {50.0, 0.0};
        CHECK(wuc_candidate({0.0, 0.0}, dep, states, 0.0, 60.0, profile) ==
              std::optional<std::size_t>{0});
    }
    {
        Deployment dep = sbs_only({{0.0, 30.0}, {30.0, 0.0}});
        std::vector<SbsState> states(2);
        states[0].mode = SbsMode::Sleep;
        states[1].mode = SbsMode::Sleep;
        CHECK(wuc_candidate({0.0, 0.0}, dep, states, 0.0, 60.0, profile) ==
              std::optional<std::size_t>{0});
    }
}
