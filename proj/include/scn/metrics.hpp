#pragma once

#include <array>
#include <vector>

#include "scn/power_model.hpp"
#include "scn/sim_core.hpp"

namespace scn {

// Per-replication metrics. ee is normalized by P_max, so its unit is bps per
// P_max-watt and the energy denominator is P_max-seconds. NaN marks a metric
// whose denominator vanished (no energy drawn, or no users).
struct MetricsReport {
    double p_block = 0.0;
    double r_scn = 0.0;
    double ee = 0.0;
    long request_count = 0;
    long blocked_count = 0;
    double total_bits = 0.0;
    double total_energy = 0.0;
    std::array<double, kNumModes> mode_time{};
};

// Mean, sample std, and normal 95% half-width over replications; ci is 0 for
// a single contributing value.
struct Stat {
    double mean = 0.0;
    double std = 0.0;
    double ci = 0.0;
};

struct AggregateReport {
    long replications = 0;
    Stat p_block;
    Stat r_scn;
    Stat ee;
    long ee_missing = 0; // replications whose ee was undefined
    std::array<double, kNumModes> mode_time_mean{};
};

// blocked/total; 0 when total = 0. Rejects blocked > total and negatives.
double blocking_probability(long blocked, long total);

// total_bits/(n_users * sim_time). Rejects a zero denominator.
double average_throughput(double total_bits, long n_users, double sim_time);

// r_scn per unit of P_max-normalized energy. Rejects energy <= 0.
double energy_efficiency(double r_scn, double total_energy_pmax_seconds);

MetricsReport report_from_run(const RunResult& run);

// Rejects an empty list. ee entries that are NaN are skipped and counted.
AggregateReport aggregate(const std::vector<MetricsReport>& reports);

} // namespace scn
