#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scn/config_io.hpp"
#include "scn/load_model.hpp"
#include "scn/metrics.hpp"
#include "scn/power_model.hpp"
#include "scn/rng.hpp"
#include "scn/sim_core.hpp"
#include "scn/verify.hpp"

namespace {

using namespace scn;
using nlohmann::ordered_json;

struct RunOpts {
    std::string config_path;
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<long> replications;
    int workers = 1;
    bool raw_sinr = false;
    bool force = false;
};

struct LoaddistOpts {
    double nu_u = 0.0;
    double nu_c = 0.0;
    double r_th = 50.0;
    std::string mode = "both";
    long samples = 200000;
    long points = 256;
    double x_max = 0.0; // 0 picks a grid from the fitted tail
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    bool force = false;
};

struct VerifyOpts {
    VerifyOptions options;
    std::string out;
    bool force = false;
};

void apply_overrides(ExperimentPlan& plan, const RunOpts& o) {
    if (o.seed) plan.base.seed = *o.seed;
    if (o.replications) plan.base.replications = *o.replications;
    if (o.raw_sinr) plan.base.raw_distance_sinr = true;
}

// "foo.csv" / "foo.json" -> "foo"; anything else is already a stem.
std::string strip_extension(const std::string& path) {
    for (const char* ext : {".csv", ".json"}) {
        std::string e = ext;
        if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0)
            return path.substr(0, path.size() - e.size());
    }
    return path;
}

ordered_json stat_json(const Stat& s) {
    return ordered_json{{"mean", s.mean}, {"std", s.std}, {"ci", s.ci}};
}

ordered_json mode_time_json(const std::array<double, kNumModes>& t) {
    ordered_json j;
    for (std::size_t m = 0; m < kNumModes; ++m) j[mode_name(static_cast<SbsMode>(m))] = t[m];
    return j;
}

ordered_json outcome_json(const SweepOutcome& o) {
    ordered_json j{{"scheduler", scheduler_name(o.point.config.scheduler)},
                   {"on_ratio", o.point.config.on_ratio},
                   {"lambda_s", o.point.config.lambda_s},
                   {"w_t", o.point.config.w_t},
                   {"utilization_label", o.point.utilization_label}};
    if (o.failed) {
        j["failed"] = true;
        j["error"] = o.error;
        return j;
    }
    j["failed"] = false;
    j["replications"] = o.agg.replications;
    j["p_block"] = stat_json(o.agg.p_block);
    j["r_scn"] = stat_json(o.agg.r_scn);
    j["ee"] = stat_json(o.agg.ee);
    j["ee_missing"] = o.agg.ee_missing;
    j["mode_time_mean"] = mode_time_json(o.agg.mode_time_mean);
    return j;
}

std::string results_json(const ExperimentPlan& plan, const std::vector<SweepOutcome>& outcomes) {
    ordered_json results = ordered_json::array();
    for (const SweepOutcome& o : outcomes) results.push_back(outcome_json(o));
    ordered_json doc{{"version", kToolVersion},
                     {"config_hash", config_hash_hex(plan)},
                     {"seed", plan.base.seed},
                     {"results", results}};
    return doc.dump(2) + "\n";
}

void emit(const std::string& path, const std::string& content, bool force) {
    if (path.empty())
        std::cout << content;
    else
        write_text_file(path, content, force);
}

int failures_in(const std::vector<SweepOutcome>& outcomes) {
    int n = 0;
    for (const SweepOutcome& o : outcomes)
        if (o.failed) ++n;
    return n;
}

int cmd_simulate(const RunOpts& o) {
    ExperimentPlan plan = plan_from(ConfigMap::parse_file(o.config_path));
    // simulate runs the base configuration only; sweep axes are ignored.
    plan.schedulers = {plan.base.scheduler};
    plan.on_ratios = {plan.base.on_ratio};
    plan.lambda_s_values = {plan.base.lambda_s};
    plan.w_t_values = {plan.base.w_t};
    apply_overrides(plan, o);
    plan.validate();

    auto outcomes = run_sweep(plan, o.workers, &std::cerr);

    std::string stem = strip_extension(o.out.empty() ? "results" : o.out);
    std::string results_path = stem + (o.format == "json" ? ".json" : ".csv");
    std::string body = o.format == "json" ? results_json(plan, outcomes) : results_csv(plan, outcomes);
    write_text_file(results_path, body, o.force);
    write_text_file(stem + ".manifest.json", plan_manifest(plan), o.force);
    std::cerr << "wrote " << results_path << " and " << stem << ".manifest.json\n";
    return failures_in(outcomes) == 0 ? 0 : 1;
}

int cmd_sweep(const RunOpts& o) {
    ExperimentPlan plan = plan_from(ConfigMap::parse_file(o.config_path));
    apply_overrides(plan, o);
    plan.validate();

    auto outcomes = run_sweep(plan, o.workers, &std::cerr);

    std::string dir = o.out.empty() ? "sweep_out" : o.out;
    write_text_file(dir + "/manifest.json", plan_manifest(plan), o.force);
    for (const SweepOutcome& oc : outcomes) {
        if (oc.failed) continue;
        write_text_file(dir + "/" + point_file_stem(oc.point) + ".csv",
                        results_csv(plan, {oc}), o.force);
    }
    std::string merged_path = dir + (o.format == "json" ? "/merged.json" : "/merged.csv");
    std::string body = o.format == "json" ? results_json(plan, outcomes) : results_csv(plan, outcomes);
    write_text_file(merged_path, body, o.force);

    int failed = failures_in(outcomes);
    std::cerr << "wrote " << outcomes.size() - static_cast<std::size_t>(failed) << " point files and "
              << merged_path << "\n";
    if (failed > 0) std::cerr << failed << " point(s) failed; see messages above\n";
    return failed == 0 ? 0 : 1;
}

struct Curve {
    std::vector<double> x;
    std::vector<double> cdf_analytic, pdf_analytic;
    std::vector<double> cdf_empirical, pdf_empirical, ecdf;
};

double fit_tail(const GammaMixtureFit& f) {
    return f.beta > 0.0 ? f.alpha / f.beta + 5.0 * std::sqrt(f.alpha) / f.beta : 0.0;
}

int cmd_loaddist(const LoaddistOpts& o) {
    MomentSpec spec;
    spec.nu_u = o.nu_u;
    spec.nu_c = o.nu_c;
    spec.r_th = o.r_th;
    spec.validate();
    if (o.points < 2) throw std::invalid_argument("loaddist: need at least 2 grid points");

    const bool want_analytic = o.mode != "empirical";
    const bool want_empirical = o.mode != "analytic";
    const bool degenerate = o.nu_u == 0.0; // no UEs: all load mass at zero

    std::optional<GammaMixtureFit> fit_a, fit_e;
    double m1 = 0.0;
    McEstimate m2;
    std::vector<double> samples;
    FitDiagnostics diag;

    if (want_analytic && !degenerate) {
        m1 = first_moment(spec);
        m2 = second_moment(spec, derive_seed(o.seed, 0xD157, 1));
        fit_a = fit_from_moments(m1, m2.value, spec.nu_u);
    }
    if (want_empirical) {
        RandomStream rng(derive_seed(o.seed, 0xD157, 2));
        samples = sample_origin_loads(spec, o.samples, rng);
        std::sort(samples.begin(), samples.end());
        if (!degenerate) fit_e = fit_empirical(samples, spec.nu_u, &diag);
    }
    if (degenerate) {
        GammaMixtureFit all_zero{0.0, 0.0, 1.0};
        if (want_analytic) fit_a = all_zero;
        if (want_empirical) fit_e = all_zero;
    }

    double ks_a = fit_a && want_empirical ? ks_statistic(samples, *fit_a) : 0.0;
    double ks_e = fit_e && want_empirical ? ks_statistic(samples, *fit_e) : 0.0;

    double x_max = o.x_max;
    if (x_max <= 0.0) {
        if (fit_a) x_max = std::max(x_max, fit_tail(*fit_a));
        if (fit_e) x_max = std::max(x_max, fit_tail(*fit_e));
        if (x_max <= 0.0) x_max = 1.0;
    }

    Curve curve;
    for (long i = 0; i < o.points; ++i) {
        double x = x_max * static_cast<double>(i) / static_cast<double>(o.points - 1);
        curve.x.push_back(x);
        if (fit_a) {
            curve.cdf_analytic.push_back(load_cdf(x, *fit_a));
            curve.pdf_analytic.push_back(load_pdf(x, *fit_a));
        }
        if (fit_e) {
            curve.cdf_empirical.push_back(load_cdf(x, *fit_e));
            curve.pdf_empirical.push_back(load_pdf(x, *fit_e));
        }
        if (want_empirical) {
            auto it = std::upper_bound(samples.begin(), samples.end(), x);
            curve.ecdf.push_back(static_cast<double>(it - samples.begin()) /
                                 static_cast<double>(samples.size()));
        }
    }

    auto fit_fields = [](const GammaMixtureFit& f) {
        return "alpha=" + format_g(f.alpha) + " beta=" + format_g(f.beta) +
               " p0=" + format_g(f.p0);
    };

    std::string body;
    if (o.format == "json") {
        ordered_json doc{{"version", kToolVersion},
                         {"nu_u", o.nu_u},
                         {"nu_c", o.nu_c},
                         {"r_th", o.r_th},
                         {"mode", o.mode},
                         {"seed", o.seed}};
        if (fit_a) {
            doc["analytic_fit"] = {{"alpha", fit_a->alpha}, {"beta", fit_a->beta},
                                   {"p0", fit_a->p0}};
            if (!degenerate) {
                doc["analytic_fit"]["m1"] = m1;
                doc["analytic_fit"]["m2"] = m2.value;
                doc["analytic_fit"]["m2_se"] = m2.se;
            }
        }
        if (fit_e) {
            doc["empirical_fit"] = {{"alpha", fit_e->alpha}, {"beta", fit_e->beta},
                                    {"p0", fit_e->p0}};
            if (!degenerate) {
                doc["empirical_fit"]["n"] = diag.n;
                doc["empirical_fit"]["zero_fraction"] = diag.zero_fraction;
            }
        }
        if (fit_a && want_empirical) doc["ks_samples_vs_analytic"] = ks_a;
        if (fit_e && want_empirical) doc["ks_samples_vs_empirical"] = ks_e;
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            ordered_json row{{"x", curve.x[i]}};
            if (fit_a) {
                row["cdf_analytic"] = curve.cdf_analytic[i];
                row["pdf_analytic"] = curve.pdf_analytic[i];
            }
            if (fit_e) {
                row["cdf_empirical"] = curve.cdf_empirical[i];
                row["pdf_empirical"] = curve.pdf_empirical[i];
            }
            if (want_empirical) row["ecdf"] = curve.ecdf[i];
            rows.push_back(row);
        }
        doc["curve"] = rows;
        body = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "# loaddist nu_u=" << format_g(o.nu_u) << " nu_c=" << format_g(o.nu_c)
            << " r_th=" << format_g(o.r_th) << " mode=" << o.mode << " seed=" << o.seed
            << " version=" << kToolVersion << "\n";
        if (fit_a) out << "# analytic_fit: " << fit_fields(*fit_a) << "\n";
        if (fit_e) out << "# empirical_fit: " << fit_fields(*fit_e) << "\n";
        if (fit_a && want_empirical)
            out << "# ks_samples_vs_analytic=" << format_g(ks_a) << "\n";
        if (fit_e && want_empirical)
            out << "# ks_samples_vs_empirical=" << format_g(ks_e) << "\n";
        out << "x";
        if (fit_a) out << ",cdf_analytic,pdf_analytic";
        if (fit_e) out << ",cdf_empirical,pdf_empirical";
        if (want_empirical) out << ",ecdf";
        out << "\n";
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            out << format_g(curve.x[i]);
            if (fit_a)
                out << ',' << format_g(curve.cdf_analytic[i]) << ','
                    << format_g(curve.pdf_analytic[i]);
            if (fit_e)
                out << ',' << format_g(curve.cdf_empirical[i]) << ','
                    << format_g(curve.pdf_empirical[i]);
            if (want_empirical) out << ',' << format_g(curve.ecdf[i]);
            out << "\n";
        }
        body = out.str();
    }
    emit(o.out, body, o.force);
    return 0;
}

int cmd_verify(const VerifyOpts& o) {
    VerifyReport report = run_verification(o.options);
    emit(o.out, verify_json(report), o.force);
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator for small-cell on/off scheduling"};
    app.require_subcommand(1);

    RunOpts sim_o;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Run the base configuration over all replications; sweep axes are ignored");
    sim->add_option("--config", sim_o.config_path, "Configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_option("--seed", sim_o.seed, "Override the master seed");
    sim->add_option("--replications", sim_o.replications, "Override the replication count")
        ->check(CLI::PositiveNumber);
    sim->add_option("--workers", sim_o.workers, "Worker threads for replications")
        ->check(CLI::PositiveNumber);
    sim->add_option("--out", sim_o.out, "Output stem or .csv/.json path (default: results)");
    sim->add_option("--format", sim_o.format, "Results format")
        ->check(CLI::IsMember({"csv", "json"}));
    sim->add_flag("--raw-distance-sinr", sim_o.raw_sinr,
                  "Use raw distances in the SINR instead of r_th-normalized ones");
    sim->add_flag("--force", sim_o.force, "Overwrite existing output files");

    RunOpts sweep_o;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run the Cartesian product of the sweep axes; one CSV per point plus a merged file");
    sweep->add_option("--config", sweep_o.config_path, "Plan file with a [sweep] section")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--seed", sweep_o.seed, "Override the master seed");
    sweep->add_option("--replications", sweep_o.replications, "Override the replication count")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--workers", sweep_o.workers, "Worker threads for replications")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_o.out, "Output directory (default: sweep_out)");
    sweep->add_option("--format", sweep_o.format, "Merged results format")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_flag("--raw-distance-sinr", sweep_o.raw_sinr,
                    "Use raw distances in the SINR instead of r_th-normalized ones");
    sweep->add_flag("--force", sweep_o.force, "Overwrite existing output files");

    LoaddistOpts ld_o;
    CLI::App* ld = app.add_subcommand(
        "loaddist", "Emit analytic and sampled load-distribution curves for plotting");
    ld->add_option("--nu-u", ld_o.nu_u, "Mean UE count per coverage disk")->required();
    ld->add_option("--nu-c", ld_o.nu_c, "Mean awake-SBS count per coverage disk")->required();
    ld->add_option("--r-th", ld_o.r_th, "Coverage radius in meters");
    ld->add_option("--mode", ld_o.mode, "Which curves to compute")
        ->check(CLI::IsMember({"analytic", "empirical", "both"}));
    ld->add_option("--samples", ld_o.samples, "Deployment samples for the empirical path")
        ->check(CLI::PositiveNumber);
    ld->add_option("--points", ld_o.points, "Grid points per curve");
    ld->add_option("--x-max", ld_o.x_max, "Grid upper end (default: fitted mean + 5 sd)");
    ld->add_option("--seed", ld_o.seed, "Sampling seed");
    ld->add_option("--out", ld_o.out, "Output path (default: stdout)");
    ld->add_option("--format", ld_o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    ld->add_flag("--force", ld_o.force, "Overwrite an existing output file");

    VerifyOpts vf_o;
    CLI::App* vf = app.add_subcommand(
        "verify", "Run the numerical cross-check suite; JSON report, nonzero exit on failure");
    vf->add_option("--seed", vf_o.options.seed, "Seed for the Monte Carlo checks");
    vf->add_option("--mc-samples", vf_o.options.mc_samples, "Points for the geometric checks")
        ->check(CLI::PositiveNumber);
    vf->add_option("--deployments", vf_o.options.deployments, "Deployments for the moment checks")
        ->check(CLI::PositiveNumber);
    vf->add_option("--perturb-lens", vf_o.options.lens_perturbation,
                   "Bias the lens reference value (check must then fail)");
    vf->add_option("--out", vf_o.out, "Report path (default: stdout)");
    vf->add_flag("--force", vf_o.force, "Overwrite an existing report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_o);
        if (*sweep) return cmd_sweep(sweep_o);
        if (*ld) return cmd_loaddist(ld_o);
        return cmd_verify(vf_o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
