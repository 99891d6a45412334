#include "scn/verify.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "scn/geometry.hpp"
#include "scn/load_model.hpp"
#include "scn/power_model.hpp"
#include "scn/rng.hpp"
#include "scn/sim_core.hpp"

namespace scn {

bool VerifyReport::all_pass() const {
    for (const VerifyCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

VerifyCheck against(std::string name, double value, double expected, double tolerance,
                    std::string detail = {}) {
    VerifyCheck c;
    c.name = std::move(name);
    c.value = value;
    c.expected = expected;
    c.tolerance = tolerance;
    c.detail = std::move(detail);
    c.pass = std::abs(value - expected) <= tolerance;
    return c;
}

// Hit-sampling estimate of the two-circle lens at separation d, checked
// against the closed form (optionally perturbed to prove the check can fail).
VerifyCheck check_lens(const VerifyOptions& opts, RandomStream& rng) {
    const double r = 50.0, d = 30.0;
    long hits = 0;
    for (long i = 0; i < opts.mc_samples; ++i) {
        double rr = r * std::sqrt(rng.uniform01());
        double th = rng.uniform(0.0, 2.0 * kPi);
        Point p{rr * std::cos(th), rr * std::sin(th)};
        if (dist2(p, Point{d, 0.0}) <= r * r) ++hits;
    }
    double disk = kPi * r * r;
    double mc = disk * double(hits) / double(opts.mc_samples);
    double analytic = lens_area(d, r) + opts.lens_perturbation;
    double p = lens_area(d, r) / disk;
    double tol = 5.0 * disk * std::sqrt(p * (1.0 - p) / double(opts.mc_samples));
    return against("lens_area_mc", mc, analytic, tol);
}

// Repeated moderate-density draws; one huge draw would overflow the
// inversion-based Poisson count.
std::vector<Point> collect_hppp(long target, double region, RandomStream& rng) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(target) + 128);
    double density = 500.0 / (kPi * region * region);
    while (static_cast<long>(pts.size()) < target) {
        auto batch = sample_hppp(density, region, rng);
        pts.insert(pts.end(), batch.begin(), batch.end());
    }
    return pts;
}

// r^2/R^2 of disk-uniform points is U(0,1); its mean pins the radial law.
VerifyCheck check_radial(const VerifyOptions& opts, RandomStream& rng) {
    const double region = 150.0;
    auto pts = collect_hppp(opts.mc_samples, region, rng);
    double sum = 0.0;
    for (const Point& p : pts) sum += dist2(p, {0.0, 0.0}) / (region * region);
    double n = double(pts.size());
    double tol = 5.0 * std::sqrt(1.0 / 12.0 / n);
    return against("radial_density", sum / n, 0.5, tol,
                   "mean of (r/R)^2 over " + std::to_string(pts.size()) + " points");
}

// Angle uniformity: the circular resultant must vanish.
VerifyCheck check_angles(const VerifyOptions& opts, RandomStream& rng) {
    const double region = 150.0;
    auto pts = collect_hppp(opts.mc_samples, region, rng);
    double c = 0.0, s = 0.0;
    for (const Point& p : pts) {
        double a = std::atan2(p.y, p.x);
        c += std::cos(a);
        s += std::sin(a);
    }
    double n = double(pts.size());
    double resultant = std::sqrt(c * c + s * s) / n;
    double tol = 5.0 * std::sqrt(1.0 / n);
    return against("angle_uniformity", resultant, 0.0, tol);
}

VerifyCheck check_moment(const VerifyOptions& opts, RandomStream& rng, int which) {
    MomentSpec spec;
    spec.nu_u = 3.0;
    spec.nu_c = 3.0;
    auto samples = sample_origin_loads(spec, opts.deployments, rng);
    double m = 0.0;
    for (double x : samples) m += (which == 1 ? x : x * x);
    m /= double(samples.size());
    double ref = which == 1 ? first_moment(spec)
                            : second_moment(spec, derive_seed(opts.seed, 0xE2, 0)).value;
    std::string name = which == 1 ? "first_moment_nu3" : "second_moment_nu3";
    return against(name, m, ref, 0.02 * ref, "sampled vs analytic, 2% band");
}

VerifyCheck check_sleep_table(const VerifyOptions&) {
    PowerProfile profile;
    const std::pair<double, SbsMode> table[] = {
        {5.0, SbsMode::Standby}, {20.0, SbsMode::Sleep}, {30.0, SbsMode::Sleep},
        {50.0, SbsMode::Sleep},  {76.0, SbsMode::Sleep}, {78.0, SbsMode::Off},
        {100.0, SbsMode::Off},
    };
    int correct = 0, total = 0;
    std::ostringstream detail;
    for (auto [t_s, want] : table) {
        SbsMode got = select_sleep_state(t_s, profile);
        ++total;
        if (got == want)
            ++correct;
        else
            detail << "t_s=" << t_s << " got " << mode_name(got) << "; ";
    }
    return against("sleep_state_table", double(correct), double(total), 0.0, detail.str());
}

VerifyCheck check_determinism(const VerifyOptions& opts) {
    SimConfig cfg;
    cfg.region_radius = 100.0;
    cfg.on_ratio = 0.6;
    cfg.lambda_s = 0.01;
    cfg.scheduler = SchedulerKind::CLB;
    cfg.sim_time = 500.0;
    cfg.seed = opts.seed;
    RunResult a = run_replication(cfg, 0);
    RunResult b = run_replication(cfg, 0);
    double diff = std::abs(a.total_bits - b.total_bits) + std::abs(a.total_energy - b.total_energy) +
                  double(std::abs(a.request_count - b.request_count));
    return against("determinism", diff, 0.0, 0.0, "identical reruns of one replication");
}

} // namespace

VerifyReport run_verification(const VerifyOptions& opts) {
    VerifyReport report;
    RandomStream rng(derive_seed(opts.seed, 0x5EED, 0));
    report.checks.push_back(check_lens(opts, rng));
    report.checks.push_back(check_radial(opts, rng));
    report.checks.push_back(check_angles(opts, rng));
    report.checks.push_back(check_moment(opts, rng, 1));
    report.checks.push_back(check_moment(opts, rng, 2));
    report.checks.push_back(check_sleep_table(opts));
    report.checks.push_back(check_determinism(opts));
    return report;
}

std::string verify_json(const VerifyReport& report) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const VerifyCheck& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"value", c.value},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
    nlohmann::ordered_json j{{"all_pass", report.all_pass()}, {"checks", checks}};
    return j.dump(2) + "\n";
}

} // namespace scn
