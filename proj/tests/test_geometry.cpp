#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "scn/geometry.hpp"
#include "scn/rng.hpp"

using namespace scn;

namespace {

// Uniform sampler over a disk centered at the origin; used as an independent
// Monte Carlo check of the closed-form areas.
struct DiskSampler {
    RandomStream rng;
    double radius;
    DiskSampler(std::uint64_t seed, double r) : rng(seed), radius(r) {}
    Point next() {
        const double r = radius * std::sqrt(rng.uniform01());
        const double th = 2.0 * kPi * rng.uniform01();
        return {r * std::cos(th), r * std::sin(th)};
    }
};

bool in_circle(const Point& p, const Point& c, double R) { return dist2(p, c) <= R * R; }

struct McArea {
    double value;
    double se;
};

// Area of the region {inside c_a} & {inside c_b, per need_b} & {outside c0,
// per outside0}, estimated over a disk of radius `window` that covers it.
McArea mc_region_area(std::uint64_t seed, long n, double window, const Point& ca, const Point& cb,
                      bool need_b, bool outside0, double R) {
    DiskSampler ds(seed, window);
    const Point c0{0.0, 0.0};
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        const Point p = ds.next();
        if (!in_circle(p, ca, R)) continue;
        if (need_b && !in_circle(p, cb, R)) continue;
        if (outside0 && in_circle(p, c0, R)) continue;
        if (!outside0 && !in_circle(p, c0, R)) continue;
        ++hits;
    }
    const double total = kPi * window * window;
    const double frac = static_cast<double>(hits) / static_cast<double>(n);
    return {total * frac, total * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n))};
}

Point ue_pos(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

} // namespace

TEST_CASE("lens_area endpoints and frozen values") {
    const double R = 50.0;
    CHECK(lens_area(0.0, R) == doctest::Approx(kPi * R * R).epsilon(1e-12));
    CHECK(lens_area(2.0 * R, R) == doctest::Approx(0.0));
    CHECK(lens_area(250.0, R) == 0.0);
    // 2R^2 acos(1/2) - (R/2) sqrt(3R^2) = R^2 (2 pi / 3 - sqrt(3)/2)
    CHECK(lens_area(R, R) == doctest::Approx(3070.9242465218917).epsilon(1e-12));
    CHECK(lens_area(25.0, R) == doctest::Approx(5380.2730625742710).epsilon(1e-12));
    CHECK(exclusion_area(0.0, R) == doctest::Approx(0.0));
    CHECK(exclusion_area(R, R) == doctest::Approx(4783.0573874525910).epsilon(1e-12));
}

TEST_CASE("lens_area is monotone decreasing, exclusion_area increasing") {
    const double R = 50.0;
    double prev = lens_area(0.0, R);
    for (int i = 1; i <= 200; ++i) {
        const double r = 2.0 * R * i / 200.0;
        const double cur = lens_area(r, R);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    prev = exclusion_area(0.0, R);
    for (int i = 1; i <= 100; ++i) {
        const double r = R * i / 100.0;
        const double cur = exclusion_area(r, R);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

TEST_CASE("lens_area matches Monte Carlo") {
    const double R = 50.0;
    for (double r : {10.0, 30.0, 50.0}) {
        const McArea mc =
            mc_region_area(101 + static_cast<std::uint64_t>(r), 400000, R, ue_pos(r, 0.0),
                           Point{}, false, false, R);
        CHECK(std::abs(mc.value - lens_area(r, R)) < 4.0 * mc.se + 1.0);
    }
}

TEST_CASE("lens_area and exclusion_area reject bad arguments") {
    CHECK_THROWS_AS(lens_area(-1.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(lens_area(10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(exclusion_area(60.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(exclusion_area(-1.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(two_ue_areas(60.0, 10.0, 0.5, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(two_ue_areas(10.0, 10.0, -0.5, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(two_ue_areas(10.0, 10.0, 4.0, 50.0), std::invalid_argument);
}

TEST_CASE("two_ue_areas case labels on clear-cut configurations") {
    const double R = 50.0;
    // Antipodal mid-range UEs: the mutual lens is short enough to stay inside
    // the serving disk.
    const TwoUeAreas ii = two_ue_areas(25.0, 25.0, kPi, R);
    CHECK(ii.case_id == OverlapCase::II);
    CHECK(ii.a_t == doctest::Approx(lens_area(50.0, R)).epsilon(1e-12));
    // One UE close to the SBS: the serving overlap of the far UE lies inside
    // the near UE's disk.
    CHECK(two_ue_areas(45.0, 2.0, 0.3, R).case_id == OverlapCase::III);
    // Both UEs near the edge, well separated: three-arc overlap.
    CHECK(two_ue_areas(40.0, 40.0, kPi / 2.0, R).case_id == OverlapCase::I);
}

TEST_CASE("two_ue_areas degenerate configurations") {
    const double R = 50.0;
    const double disk = kPi * R * R;

    SUBCASE("both UEs on the SBS") {
        const TwoUeAreas a = two_ue_areas(0.0, 0.0, 0.0, R);
        CHECK(a.case_id == OverlapCase::II);
        CHECK(a.a_t == doctest::Approx(disk).epsilon(1e-12));
        CHECK(a.a_ec == doctest::Approx(0.0));
        CHECK(a.constituent.size() == 4);
    }
    SUBCASE("coincident UEs away from the SBS") {
        const TwoUeAreas a = two_ue_areas(30.0, 30.0, 0.0, R);
        CHECK(a.case_id == OverlapCase::III);
        CHECK(a.a_t == doctest::Approx(lens_area(30.0, R)).epsilon(1e-12));
        CHECK(a.constituent.size() == 3);
    }
    SUBCASE("antipodal edge UEs: tangent disks share nothing") {
        const TwoUeAreas a = two_ue_areas(R, R, kPi, R);
        CHECK(a.a_t == doctest::Approx(0.0));
        CHECK(a.a_ec == doctest::Approx(0.0));
        double sum = 0.0;
        for (double c : a.constituent) sum += c;
        CHECK(sum == doctest::Approx(disk).epsilon(1e-9));
    }
    SUBCASE("one UE on the SBS") {
        const TwoUeAreas a = two_ue_areas(0.0, 35.0, 1.0, R);
        CHECK(a.a_t == doctest::Approx(lens_area(35.0, R)).epsilon(1e-9));
        // UE1's disk is the serving disk itself, so it has no exclusion area;
        // UE2 keeps its full one.
        CHECK(a.a_e1 == doctest::Approx(0.0));
        CHECK(a.a_e2 == doctest::Approx(exclusion_area(35.0, R)).epsilon(1e-9));
    }
}

TEST_CASE("two_ue_areas closure and consistency over random configurations") {
    const double R = 50.0;
    const double disk = kPi * R * R;
    RandomStream rng(2024);
    for (int it = 0; it < 2000; ++it) {
        double r1 = R * rng.uniform01();
        double r2 = R * rng.uniform01();
        double phi = kPi * rng.uniform01();
        if (it % 17 == 0) r1 = 0.0;
        if (it % 23 == 0) r2 = R;
        if (it % 31 == 0) phi = 0.0;
        if (it % 37 == 0) phi = kPi;
        const TwoUeAreas a = two_ue_areas(r1, r2, phi, R);
        CAPTURE(r1);
        CAPTURE(r2);
        CAPTURE(phi);

        const double d12 = dist(ue_pos(r1, 0.0), ue_pos(r2, phi));
        const double a12 = lens_area(d12, R);

        // Non-negativity and bounds.
        CHECK(a.a_t >= 0.0);
        CHECK(a.a_t <= std::min(std::min(a.a_o1, a.a_o2), a12) + 1e-6);
        CHECK(a.a_ec >= 0.0);
        CHECK(a.a_e1 >= 0.0);
        CHECK(a.a_e2 >= 0.0);

        // Pairwise overlaps agree with the lens formula.
        CHECK(a.a_o1 == doctest::Approx(lens_area(r1, R)).epsilon(1e-12));
        CHECK(a.a_o2 == doctest::Approx(lens_area(r2, R)).epsilon(1e-12));

        // Each UE disk splits into serving overlap, common exclusion and own
        // exclusion; the UE-UE lens splits into a_t and a_ec.
        CHECK(a.a_o1 + a.a_ec + a.a_e1 == doctest::Approx(disk).epsilon(1e-9));
        CHECK(a.a_o2 + a.a_ec + a.a_e2 == doctest::Approx(disk).epsilon(1e-9));
        CHECK(a.a_ec + a.a_t == doctest::Approx(a12).epsilon(1e-9));

        // Constituents partition the serving disk.
        const std::size_t expect_n = a.case_id == OverlapCase::III ? 3 : 4;
        CHECK(a.constituent.size() == expect_n);
        double sum = 0.0;
        for (double c : a.constituent) {
            CHECK(c >= 0.0);
            sum += c;
        }
        CHECK(sum == doctest::Approx(disk).epsilon(1e-9));

        if (a.case_id == OverlapCase::II) CHECK(a.a_ec <= 1e-6);
        if (a.case_id == OverlapCase::III)
            CHECK(std::min(std::abs(a.a_t - a.a_o1), std::abs(a.a_t - a.a_o2)) <= 1e-6);

        // Swapping the UEs swaps their labels and keeps shared areas.
        const TwoUeAreas b = two_ue_areas(r2, r1, phi, R);
        CHECK(b.a_t == doctest::Approx(a.a_t).epsilon(1e-9));
        CHECK(b.a_ec == doctest::Approx(a.a_ec).epsilon(1e-9));
        CHECK(b.a_o1 == doctest::Approx(a.a_o2).epsilon(1e-12));
        CHECK(b.a_e1 == doctest::Approx(a.a_e2).epsilon(1e-9));
    }
}

TEST_CASE("triple overlap shrinks as the UEs separate") {
    const double R = 50.0;
    double prev = triple_overlap_area(30.0, 35.0, 0.0, R);
    for (int i = 1; i <= 60; ++i) {
        const double phi = kPi * i / 60.0;
        const double cur = triple_overlap_area(30.0, 35.0, phi, R);
        CHECK(cur <= prev + 1e-9);
        prev = cur;
    }
}

TEST_CASE("two_ue_areas matches Monte Carlo on fixed configurations") {
    const double R = 50.0;
    struct Cfg {
        double r1, r2, phi;
    };
    const Cfg cfgs[] = {{40.0, 40.0, kPi / 2.0}, {45.0, 2.0, 0.3},  {10.0, 12.0, 2.5},
                        {30.0, 48.0, 1.2},       {25.0, 25.0, 0.1}, {50.0, 50.0, 3.0}};
    std::uint64_t seed = 7000;
    for (const Cfg& c : cfgs) {
        const TwoUeAreas a = two_ue_areas(c.r1, c.r2, c.phi, R);
        const Point c1 = ue_pos(c.r1, 0.0);
        const Point c2 = ue_pos(c.r2, c.phi);
        CAPTURE(c.r1);
        CAPTURE(c.r2);
        CAPTURE(c.phi);

        // a_t: inside all three disks; sampled over the serving disk.
        const McArea t = mc_region_area(seed++, 400000, R, c1, c2, true, false, R);
        CHECK(std::abs(t.value - a.a_t) < 4.0 * t.se + 1.0);

        // a_ec: inside both UE disks, outside the serving disk; window 2R.
        const McArea ec = mc_region_area(seed++, 1000000, 2.0 * R, c1, c2, true, true, R);
        CHECK(std::abs(ec.value - a.a_ec) < 4.0 * ec.se + 2.0);

        // a_e1: inside UE1 only, outside both others.
        DiskSampler ds(seed++, 2.0 * R);
        long hits = 0;
        const long n = 1000000;
        for (long i = 0; i < n; ++i) {
            const Point p = ds.next();
            if (in_circle(p, c1, R) && !in_circle(p, c2, R) && !in_circle(p, Point{}, R)) ++hits;
        }
        const double total = kPi * 4.0 * R * R;
        const double frac = static_cast<double>(hits) / static_cast<double>(n);
        const double e1 = total * frac;
        const double se = total * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n));
        CHECK(std::abs(e1 - a.a_e1) < 4.0 * se + 2.0);
    }
}

TEST_CASE("sample_hppp is deterministic and matches the target density") {
    RandomStream a(99), b(99);
    const std::vector<Point> pa = sample_hppp(5e-4, 250.0, a);
    const std::vector<Point> pb = sample_hppp(5e-4, 250.0, b);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].x == pb[i].x);
        CHECK(pa[i].y == pb[i].y);
    }

    RandomStream rng(123);
    const double density = 5e-4;
    const double radius = 250.0;
    const double mean_expect = density * kPi * radius * radius; // 98.17
    double count_sum = 0.0;
    double rr_sum = 0.0;
    long total = 0;
    const int draws = 200;
    for (int d = 0; d < draws; ++d) {
        const std::vector<Point> pts = sample_hppp(density, radius, rng);
        count_sum += static_cast<double>(pts.size());
        for (const Point& p : pts) {
            rr_sum += (p.x * p.x + p.y * p.y) / (radius * radius);
            ++total;
        }
    }
    const double mean_count = count_sum / draws;
    const double se_count = std::sqrt(mean_expect / draws);
    CHECK(std::abs(mean_count - mean_expect) < 5.0 * se_count);
    // r^2/R^2 is uniform on [0,1] for points uniform in the disk.
    const double mean_rr = rr_sum / static_cast<double>(total);
    CHECK(std::abs(mean_rr - 0.5) < 5.0 / std::sqrt(12.0 * static_cast<double>(total)));

    CHECK(sample_hppp(0.0, 100.0, rng).empty());
    CHECK_THROWS_AS(sample_hppp(-1e-4, 100.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_hppp(1e-4, 0.0, rng), std::invalid_argument);
}

TEST_CASE("Deployment::validate rejects malformed deployments") {
    Deployment d;
    d.r_th = 50.0;
    d.region_radius = 250.0;
    d.sbs = {{0.0, 0.0}, {40.0, 0.0}};
    d.ue = {{-30.0, 0.0}};
    CHECK_NOTHROW(d.validate());

    Deployment bad = d;
    bad.r_th = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = d;
    bad.region_radius = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = d;
    bad.ue.push_back({400.0, 0.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = d;
    bad.sbs.push_back({std::nan(""), 0.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
