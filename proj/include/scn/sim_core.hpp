#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "scn/geometry.hpp"
#include "scn/load_model.hpp"
#include "scn/power_model.hpp"
#include "scn/scheduler.hpp"

namespace scn {

struct SimConfig {
    double rho_c = 5e-4;  // SBS per m^2
    double rho_u = 5e-4;  // UE per m^2
    double region_radius = 250.0;
    double r_th = 50.0;
    double lambda_u = 0.001;     // service requests per second per UE
    double mean_file_size = 8e6; // bits
    double lambda_s = 0.001;     // sleep rate; 0 means initial sleepers never wake
    double w_t = 60.0;           // tolerable waiting time, seconds
    double on_ratio = 1.0;
    double bandwidth = 1e6; // Hz
    double snr_db = 20.0;
    double path_loss_exp = 4.0;
    double sim_time = 10000.0;
    double warmup_time = 0.0;
    long replications = 1;
    std::uint64_t seed = 1;
    SchedulerKind scheduler = SchedulerKind::ROO;
    double kappa = 0.3;
    int dlb_max_hops = 3;
    bool dlb_analytic_fit = false; // analytic-moment load model instead of the per-run fit
    bool raw_distance_sinr = false;
    PowerProfile profile;

    void validate() const;
};

// Shannon rate of a link of the given length against the currently active
// interferers. Distances are clamped to 1 m and normalized by r_th unless
// raw_distance_sinr is set.
double compute_rate(double dist_m, const std::vector<double>& interferer_dists_m,
                    const SimConfig& cfg);

enum class EventKind { RequestArrival, ServiceComplete, SleepExpire, BootComplete, WaitDeadline };

// Raw per-replication tallies; metrics ratios are computed downstream.
struct RunResult {
    long n_sbs = 0;
    long n_users = 0;
    long request_count = 0;
    long blocked_count = 0;
    long served_count = 0;
    double total_bits = 0.0;
    double total_energy = 0.0; // P_max * seconds over the measurement window
    std::array<double, kNumModes> mode_time{};
    double measure_time = 0.0;
    long wake_events = 0;
    long dlb_decisions = 0;
    long dlb_clb_matches = 0;
};

// Instrumentation hooks; every callback defaults to a no-op.
struct SimObserver {
    virtual ~SimObserver() = default;
    virtual void on_event(double time, EventKind kind, std::size_t entity) {
        (void)time, (void)kind, (void)entity;
    }
    virtual void on_transition(double time, std::size_t sbs, SbsMode from, SbsMode to) {
        (void)time, (void)sbs, (void)from, (void)to;
    }
    virtual void on_session_start(double time, std::size_t ue, std::size_t sbs, double rate) {
        (void)time, (void)ue, (void)sbs, (void)rate;
    }
    virtual void on_resolved(double time, std::size_t ue, bool served) {
        (void)time, (void)ue, (void)served;
    }
    virtual void on_decision_snapshot(double time, const Deployment& dep,
                                      const std::vector<SbsMode>& modes) {
        (void)time, (void)dep, (void)modes;
    }
};

// One event loop over a fixed deployment.
RunResult run_replication_on(const SimConfig& cfg, const Deployment& dep, long rep_index,
                             SimObserver* observer = nullptr,
                             const std::optional<GammaMixtureFit>& analytic_fit = std::nullopt);

// Samples the deployment for the given replication index, then runs it.
RunResult run_replication(const SimConfig& cfg, long rep_index, SimObserver* observer = nullptr,
                          const std::optional<GammaMixtureFit>& analytic_fit = std::nullopt);

// All configured replications, optionally on a worker pool. Results are
// ordered by replication index regardless of worker count.
std::vector<RunResult> run_many(const SimConfig& cfg, int workers = 1);

// The analytic DLB load model at the awake density implied by the config.
GammaMixtureFit analytic_load_fit(const SimConfig& cfg);

} // namespace scn
