#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scn/metrics.hpp"
#include "scn/scheduler.hpp"
#include "scn/sim_core.hpp"

namespace scn {

inline constexpr const char* kToolVersion = "1.0.0";

// "[section]" plus "key = value" lines; keys are addressed as "section.key".
// Lines starting with '#' or ';' are comments. Every accessor that fails
// names the offending key and the config origin.
class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text, const std::string& origin = "<config>");

    bool has(const std::string& key) const;
    const std::string& origin() const { return origin_; }

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_long(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    // Comma separated; an empty value is an empty list.
    std::vector<std::string> get_string_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double_or(const std::string& key, double fallback) const;
    long get_long_or(const std::string& key, long fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;

private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    std::map<std::string, std::string> values_;
    std::string origin_;
};

// Reads the [sim] section; radio constants and scheduler knobs fall back to
// defaults, everything else is required.
SimConfig sim_config_from(const ConfigMap& cfg);

struct ExperimentPlan {
    SimConfig base;
    std::vector<SchedulerKind> schedulers;
    std::vector<double> on_ratios;
    std::vector<double> lambda_s_values;
    std::vector<double> w_t_values;
    std::string utilization_label = "custom";
    void validate() const; // every axis non-empty
};

// [sweep] axes; a missing axis collapses to the base value.
ExperimentPlan plan_from(const ConfigMap& cfg);

struct SweepPoint {
    SimConfig config;
    std::string utilization_label;
};

std::vector<SweepPoint> expand_plan(const ExperimentPlan& plan);

// Filename-safe identifier, e.g. "clb_on0.6_ls0.001_wt60".
std::string point_file_stem(const SweepPoint& point);

struct SweepOutcome {
    SweepPoint point;
    AggregateReport agg;
    bool failed = false;
    std::string error;
};

// Runs one point's replications and aggregates; failures are captured, not
// thrown.
SweepOutcome run_point(const SweepPoint& point, int workers);

// Runs the whole plan; one failed point does not stop the rest.
std::vector<SweepOutcome> run_sweep(const ExperimentPlan& plan, int workers,
                                    std::ostream* progress = nullptr);

// %.10g; NaN renders as an empty field.
std::string format_g(double v);

std::string csv_header();
std::string csv_row(const SweepOutcome& outcome);
// Leading comment line carries the config hash and seed; failed points are
// omitted from the rows.
std::string results_csv(const ExperimentPlan& plan, const std::vector<SweepOutcome>& outcomes);

std::string config_hash_hex(const ExperimentPlan& plan);
// Resolved plan, hash, and seed as pretty JSON.
std::string plan_manifest(const ExperimentPlan& plan);

// Creates parent directories; refuses to overwrite unless force is set.
void write_text_file(const std::string& path, const std::string& content, bool force);

} // namespace scn
