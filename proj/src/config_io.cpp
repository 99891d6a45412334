#include "scn/config_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace scn {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
    ConfigMap cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    auto die = [&](const std::string& what) {
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') die("unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) die("empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) die("expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) die("empty key");
        if (section.empty()) die("key '" + key + "' outside any section");
        std::string full = section + "." + key;
        if (cfg.values_.count(full)) die("duplicate key '" + full + "'");
        cfg.values_[full] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

void ConfigMap::fail(const std::string& key, const std::string& what) const {
    throw std::runtime_error(origin_ + ": key '" + key + "': " + what);
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail(key, "missing required key");
    return it->second;
}

double ConfigMap::get_double(const std::string& key) const {
    std::string v = get_string(key);
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(key, "'" + v + "' is not a number");
    }
}

long ConfigMap::get_long(const std::string& key) const {
    std::string v = get_string(key);
    try {
        std::size_t used = 0;
        long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(key, "'" + v + "' is not an integer");
    }
}

std::uint64_t ConfigMap::get_u64(const std::string& key) const {
    std::string v = get_string(key);
    try {
        std::size_t used = 0;
        unsigned long long x = std::stoull(v, &used);
        if (used != v.size() || v.find('-') != std::string::npos)
            throw std::invalid_argument("bad unsigned");
        return x;
    } catch (const std::exception&) {
        fail(key, "'" + v + "' is not an unsigned integer");
    }
}

bool ConfigMap::get_bool(const std::string& key) const {
    std::string v = get_string(key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "'" + v + "' is not a boolean");
}

std::vector<std::string> ConfigMap::get_string_list(const std::string& key) const {
    std::string v = get_string(key);
    std::vector<std::string> out;
    if (trim(v).empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = v.find(',', start);
        std::string item = trim(v.substr(start, comma - start));
        if (item.empty()) fail(key, "empty list element");
        out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : get_string_list(key)) {
        try {
            std::size_t used = 0;
            double x = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument("trailing characters");
            out.push_back(x);
        } catch (const std::exception&) {
            fail(key, "'" + item + "' is not a number");
        }
    }
    return out;
}

std::string ConfigMap::get_string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}
double ConfigMap::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}
long ConfigMap::get_long_or(const std::string& key, long fallback) const {
    return has(key) ? get_long(key) : fallback;
}
bool ConfigMap::get_bool_or(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

SimConfig sim_config_from(const ConfigMap& cfg) {
    SimConfig sim;
    sim.rho_c = cfg.get_double("sim.rho_c");
    sim.rho_u = cfg.get_double("sim.rho_u");
    sim.region_radius = cfg.get_double("sim.region_radius");
    sim.r_th = cfg.get_double("sim.r_th");
    sim.lambda_u = cfg.get_double("sim.lambda_u");
    sim.mean_file_size = cfg.get_double("sim.mean_file_size");
    sim.lambda_s = cfg.get_double("sim.lambda_s");
    sim.w_t = cfg.get_double("sim.w_t");
    sim.on_ratio = cfg.get_double("sim.on_ratio");
    sim.sim_time = cfg.get_double("sim.sim_time");
    sim.replications = cfg.get_long("sim.replications");
    sim.seed = cfg.get_u64("sim.seed");
    std::string sched = cfg.get_string("sim.scheduler");
    auto kind = scheduler_from_name(sched);
    if (!kind)
        throw std::runtime_error(cfg.origin() + ": key 'sim.scheduler': unknown scheduler '" +
                                 sched + "'");
    sim.scheduler = *kind;

    sim.bandwidth = cfg.get_double_or("sim.bandwidth", sim.bandwidth);
    sim.snr_db = cfg.get_double_or("sim.snr_db", sim.snr_db);
    sim.path_loss_exp = cfg.get_double_or("sim.path_loss_exp", sim.path_loss_exp);
    sim.warmup_time = cfg.get_double_or("sim.warmup_time", sim.warmup_time);
    sim.kappa = cfg.get_double_or("sim.kappa", sim.kappa);
    sim.dlb_max_hops = int(cfg.get_long_or("sim.dlb_max_hops", sim.dlb_max_hops));
    sim.dlb_analytic_fit = cfg.get_bool_or("sim.dlb_analytic_fit", sim.dlb_analytic_fit);
    sim.raw_distance_sinr = cfg.get_bool_or("sim.raw_distance_sinr", sim.raw_distance_sinr);

    try {
        sim.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(cfg.origin() + ": " + e.what());
    }
    return sim;
}

void ExperimentPlan::validate() const {
    auto bad = [](const char* axis) {
        throw std::runtime_error(std::string("plan: empty axis '") + axis + "'");
    };
    if (schedulers.empty()) bad("schedulers");
    if (on_ratios.empty()) bad("on_ratios");
    if (lambda_s_values.empty()) bad("lambda_s");
    if (w_t_values.empty()) bad("w_t");
}

ExperimentPlan plan_from(const ConfigMap& cfg) {
    ExperimentPlan plan;
    plan.base = sim_config_from(cfg);
    plan.utilization_label = cfg.get_string_or("sim.label", plan.utilization_label);
    if (cfg.has("sweep.schedulers")) {
        for (const std::string& name : cfg.get_string_list("sweep.schedulers")) {
            auto kind = scheduler_from_name(name);
            if (!kind)
                throw std::runtime_error(cfg.origin() +
                                         ": key 'sweep.schedulers': unknown scheduler '" + name +
                                         "'");
            plan.schedulers.push_back(*kind);
        }
    } else {
        plan.schedulers = {plan.base.scheduler};
    }
    plan.on_ratios = cfg.has("sweep.on_ratios") ? cfg.get_double_list("sweep.on_ratios")
                                                : std::vector<double>{plan.base.on_ratio};
    plan.lambda_s_values = cfg.has("sweep.lambda_s") ? cfg.get_double_list("sweep.lambda_s")
                                                     : std::vector<double>{plan.base.lambda_s};
    plan.w_t_values = cfg.has("sweep.w_t") ? cfg.get_double_list("sweep.w_t")
                                           : std::vector<double>{plan.base.w_t};
    plan.validate();
    return plan;
}

std::vector<SweepPoint> expand_plan(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<SweepPoint> points;
    for (SchedulerKind k : plan.schedulers)
        for (double on : plan.on_ratios)
            for (double ls : plan.lambda_s_values)
                for (double wt : plan.w_t_values) {
                    SweepPoint p;
                    p.config = plan.base;
                    p.config.scheduler = k;
                    p.config.on_ratio = on;
                    p.config.lambda_s = ls;
                    p.config.w_t = wt;
                    p.utilization_label = plan.utilization_label;
                    points.push_back(std::move(p));
                }
    return points;
}

std::string format_g(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string point_file_stem(const SweepPoint& point) {
    const SimConfig& c = point.config;
    return std::string(scheduler_name(c.scheduler)) + "_on" + format_g(c.on_ratio) + "_ls" +
           format_g(c.lambda_s) + "_wt" + format_g(c.w_t);
}

SweepOutcome run_point(const SweepPoint& point, int workers) {
    SweepOutcome out;
    out.point = point;
    try {
        std::vector<RunResult> runs = run_many(point.config, workers);
        std::vector<MetricsReport> reports;
        reports.reserve(runs.size());
        for (const RunResult& r : runs) reports.push_back(report_from_run(r));
        out.agg = aggregate(reports);
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

std::vector<SweepOutcome> run_sweep(const ExperimentPlan& plan, int workers,
                                    std::ostream* progress) {
    std::vector<SweepPoint> points = expand_plan(plan);
    std::vector<SweepOutcome> outcomes;
    outcomes.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (progress)
            (*progress) << "[" << (i + 1) << "/" << points.size() << "] "
                        << point_file_stem(points[i]) << " ..." << std::flush;
        outcomes.push_back(run_point(points[i], workers));
        if (progress) {
            if (outcomes.back().failed)
                (*progress) << " FAILED: " << outcomes.back().error << "\n";
            else
                (*progress) << " p_block=" << format_g(outcomes.back().agg.p_block.mean) << "\n";
        }
    }
    return outcomes;
}

std::string csv_header() {
    return "scheduler,on_ratio,lambda_s,w_t,utilization_label,"
           "p_block_mean,p_block_ci,r_scn_mean,r_scn_ci,ee_mean,ee_ci,seed,replications,"
           "time_active_mean,time_idle_mean,time_standby_mean,time_sleep_mean,time_off_mean,"
           "time_bootingup_mean";
}

std::string csv_row(const SweepOutcome& outcome) {
    const SimConfig& c = outcome.point.config;
    const AggregateReport& a = outcome.agg;
    std::ostringstream row;
    row << scheduler_name(c.scheduler) << ',' << format_g(c.on_ratio) << ','
        << format_g(c.lambda_s) << ',' << format_g(c.w_t) << ',' << outcome.point.utilization_label
        << ',' << format_g(a.p_block.mean) << ',' << format_g(a.p_block.ci) << ','
        << format_g(a.r_scn.mean) << ',' << format_g(a.r_scn.ci) << ',' << format_g(a.ee.mean)
        << ',' << format_g(a.ee.ci) << ',' << c.seed << ',' << a.replications;
    for (std::size_t m = 0; m < kNumModes; ++m) row << ',' << format_g(a.mode_time_mean[m]);
    return row.str();
}

namespace {

nlohmann::ordered_json plan_to_json(const ExperimentPlan& plan) {
    const SimConfig& c = plan.base;
    nlohmann::ordered_json sim{{"rho_c", c.rho_c},
                               {"rho_u", c.rho_u},
                               {"region_radius", c.region_radius},
                               {"r_th", c.r_th},
                               {"lambda_u", c.lambda_u},
                               {"mean_file_size", c.mean_file_size},
                               {"lambda_s", c.lambda_s},
                               {"w_t", c.w_t},
                               {"on_ratio", c.on_ratio},
                               {"bandwidth", c.bandwidth},
                               {"snr_db", c.snr_db},
                               {"path_loss_exp", c.path_loss_exp},
                               {"sim_time", c.sim_time},
                               {"warmup_time", c.warmup_time},
                               {"replications", c.replications},
                               {"seed", c.seed},
                               {"scheduler", scheduler_name(c.scheduler)},
                               {"kappa", c.kappa},
                               {"dlb_max_hops", c.dlb_max_hops},
                               {"dlb_analytic_fit", c.dlb_analytic_fit},
                               {"raw_distance_sinr", c.raw_distance_sinr},
                               {"label", plan.utilization_label}};
    nlohmann::ordered_json sweep;
    nlohmann::ordered_json scheds = nlohmann::ordered_json::array();
    for (SchedulerKind k : plan.schedulers) scheds.push_back(scheduler_name(k));
    sweep["schedulers"] = scheds;
    sweep["on_ratios"] = plan.on_ratios;
    sweep["lambda_s"] = plan.lambda_s_values;
    sweep["w_t"] = plan.w_t_values;
    return nlohmann::ordered_json{{"sim", sim}, {"sweep", sweep}};
}

} // namespace

std::string config_hash_hex(const ExperimentPlan& plan) {
    std::string dump = plan_to_json(plan).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string plan_manifest(const ExperimentPlan& plan) {
    nlohmann::ordered_json manifest{{"version", kToolVersion},
                                    {"config_hash", config_hash_hex(plan)},
                                    {"seed", plan.base.seed},
                                    {"config", plan_to_json(plan)}};
    return manifest.dump(2) + "\n";
}

std::string results_csv(const ExperimentPlan& plan, const std::vector<SweepOutcome>& outcomes) {
    std::ostringstream out;
    out << "# config_hash=" << config_hash_hex(plan) << " seed=" << plan.base.seed
        << " version=" << kToolVersion << "\n";
    out << csv_header() << "\n";
    for (const SweepOutcome& o : outcomes)
        if (!o.failed) out << csv_row(o) << "\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content, bool force) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (!force && fs::exists(p))
        throw std::runtime_error("refusing to overwrite '" + path + "' (use --force)");
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace scn
