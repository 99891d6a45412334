#include "scn/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scn {

double blocking_probability(long blocked, long total) {
    if (blocked < 0 || total < 0)
        throw std::invalid_argument("blocking_probability: negative count");
    if (blocked > total)
        throw std::invalid_argument("blocking_probability: blocked exceeds total");
    if (total == 0) return 0.0;
    return double(blocked) / double(total);
}

double average_throughput(double total_bits, long n_users, double sim_time) {
    if (total_bits < 0.0) throw std::invalid_argument("average_throughput: negative bits");
    if (n_users <= 0) throw std::invalid_argument("average_throughput: n_users must be > 0");
    if (!(sim_time > 0.0)) throw std::invalid_argument("average_throughput: sim_time must be > 0");
    return total_bits / (double(n_users) * sim_time);
}

double energy_efficiency(double r_scn, double total_energy_pmax_seconds) {
    if (r_scn < 0.0) throw std::invalid_argument("energy_efficiency: negative throughput");
    if (!(total_energy_pmax_seconds > 0.0))
        throw std::invalid_argument("energy_efficiency: energy must be > 0");
    return r_scn / total_energy_pmax_seconds;
}

MetricsReport report_from_run(const RunResult& run) {
    MetricsReport rep;
    rep.request_count = run.request_count;
    rep.blocked_count = run.blocked_count;
    rep.total_bits = run.total_bits;
    rep.total_energy = run.total_energy;
    rep.mode_time = run.mode_time;
    rep.p_block = blocking_probability(run.blocked_count, run.request_count);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.r_scn = run.n_users > 0 ? average_throughput(run.total_bits, run.n_users, run.measure_time)
                                : nan;
    rep.ee = (run.total_energy > 0.0 && run.n_users > 0)
                 ? energy_efficiency(rep.r_scn, run.total_energy)
                 : nan;
    return rep;
}

namespace {

Stat stat_over(const std::vector<double>& xs) {
    Stat s;
    if (xs.empty()) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / double(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / double(xs.size() - 1));
        s.ci = 1.96 * s.std / std::sqrt(double(xs.size()));
    }
    return s;
}

} // namespace

AggregateReport aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
    AggregateReport agg;
    agg.replications = long(reports.size());
    std::vector<double> p_block, r_scn, ee;
    for (const MetricsReport& r : reports) {
        p_block.push_back(r.p_block);
        if (!std::isnan(r.r_scn)) r_scn.push_back(r.r_scn);
        if (std::isnan(r.ee)) {
            agg.ee_missing++;
        } else {
            ee.push_back(r.ee);
        }
        for (std::size_t m = 0; m < kNumModes; ++m) agg.mode_time_mean[m] += r.mode_time[m];
    }
    for (std::size_t m = 0; m < kNumModes; ++m) agg.mode_time_mean[m] /= double(reports.size());
    agg.p_block = stat_over(p_block);
    agg.r_scn = stat_over(r_scn);
    agg.ee = stat_over(ee);
    return agg;
}

} // namespace scn
