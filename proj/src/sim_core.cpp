#include "scn/sim_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>

#include "scn/rng.hpp"

namespace scn {

void SimConfig::validate() const {
    auto bad = [](const char* msg) { throw std::invalid_argument(std::string("SimConfig: ") + msg); };
    if (!(rho_c >= 0.0) || !(rho_u >= 0.0)) bad("densities must be >= 0");
    if (!(region_radius > 0.0)) bad("region_radius must be > 0");
    if (!(r_th > 0.0)) bad("r_th must be > 0");
    if (!(lambda_u > 0.0)) bad("lambda_u must be > 0");
    if (!(mean_file_size > 0.0)) bad("mean_file_size must be > 0");
    if (!(lambda_s >= 0.0)) bad("lambda_s must be >= 0");
    if (!(w_t >= 0.0)) bad("w_t must be >= 0");
    if (!(on_ratio > 0.0 && on_ratio <= 1.0)) bad("on_ratio must be in (0, 1]");
    if (!(bandwidth > 0.0)) bad("bandwidth must be > 0");
    if (!std::isfinite(snr_db)) bad("snr_db must be finite");
    if (!(path_loss_exp > 0.0)) bad("path_loss_exp must be > 0");
    if (!(sim_time > 0.0) || !std::isfinite(sim_time)) bad("sim_time must be finite and > 0");
    if (!(warmup_time >= 0.0 && warmup_time < sim_time)) bad("warmup_time must be in [0, sim_time)");
    if (replications < 1) bad("replications must be >= 1");
    if (!(kappa > 0.0 && kappa < 1.0)) bad("kappa must be in (0, 1)");
    if (dlb_max_hops < 1) bad("dlb_max_hops must be >= 1");
    profile.validate();
}

double compute_rate(double dist_m, const std::vector<double>& interferer_dists_m,
                    const SimConfig& cfg) {
    auto norm = [&](double x) {
        double clamped = std::max(x, 1.0);
        return cfg.raw_distance_sinr ? clamped : clamped / cfg.r_th;
    };
    double signal = std::pow(norm(dist_m), -cfg.path_loss_exp);
    double denom = std::pow(10.0, -cfg.snr_db / 10.0);
    for (double x : interferer_dists_m) denom += std::pow(norm(x), -cfg.path_loss_exp);
    return cfg.bandwidth * std::log2(1.0 + signal / denom);
}

GammaMixtureFit analytic_load_fit(const SimConfig& cfg) {
    MomentSpec ms;
    ms.r_th = cfg.r_th;
    ms.nu_u = cfg.rho_u * kPi * cfg.r_th * cfg.r_th;
    ms.nu_c = cfg.rho_c * cfg.on_ratio * kPi * cfg.r_th * cfg.r_th;
    double m1 = first_moment(ms);
    McEstimate m2 = second_moment(ms, derive_seed(cfg.seed, 0xA11A, 0));
    return fit_from_moments(m1, m2.value, ms.nu_u);
}

namespace {

struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    std::size_t entity;
    std::uint64_t gen;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

struct UeState {
    RandomStream traffic;
    std::uint64_t gen = 0; // identifies the current request; bumped at each resolution
    bool waiting = false;
    double arrival_time = 0.0;
    double size = 0.0;
    double next_size = 0.0; // drawn when the next arrival is scheduled

    explicit UeState(std::uint64_t seed) : traffic(seed) {}
};

struct SbsBook {
    std::uint64_t sleep_gen = 0; // bumped by begin_sleep and wake_order
    double last_touch = 0.0;
    bool in_session = false;
    std::size_t session_ue = 0;
    double session_size = 0.0;
    double session_arrival = 0.0;
    bool wuc_pending = false; // one turn-off owed when the trigger session ends
    std::size_t reserved_ue = 0;
    std::uint64_t reserved_ue_gen = 0;
};

class Simulation {
public:
    Simulation(const SimConfig& cfg, const Deployment& dep, long rep, SimObserver* obs,
               const std::optional<GammaMixtureFit>& fit)
        : cfg_(cfg), dep_(dep), obs_(obs),
          sched_rng_(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep), 2)),
          r2_(cfg.r_th * cfg.r_th) {
        policy_.kind = cfg.scheduler;
        policy_.kappa = cfg.kappa;
        policy_.max_hops = cfg.dlb_max_hops;
        policy_.load_fit = fit;
        policy_.validate();

        std::size_t n_sbs = dep_.sbs.size();
        states_.assign(n_sbs, SbsState{});
        book_.assign(n_sbs, SbsBook{});
        ledger_.init(n_sbs);
        ues_.reserve(dep_.ue.size());
        for (std::size_t u = 0; u < dep_.ue.size(); ++u)
            ues_.emplace_back(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep), 1000 + u));

        res_.n_sbs = static_cast<long>(n_sbs);
        res_.n_users = static_cast<long>(dep_.ue.size());
        res_.measure_time = cfg_.sim_time - cfg_.warmup_time;
    }

    RunResult run() {
        for (std::size_t s : initial_sleepers(dep_, cfg_.on_ratio, cfg_.scheduler, sched_rng_))
            put_to_sleep(s, 0.0);
        if (cfg_.scheduler == SchedulerKind::DLB && !policy_.load_fit) init_dlb_fit();
        for (std::size_t u = 0; u < ues_.size(); ++u) schedule_next_arrival(u, 0.0);

        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.time > cfg_.sim_time) break;
            queue_.pop();
            if (obs_) obs_->on_event(ev.time, ev.kind, ev.entity);
            switch (ev.kind) {
            case EventKind::RequestArrival: handle_arrival(ev.entity, ev.gen, ev.time); break;
            case EventKind::ServiceComplete: handle_service_complete(ev.entity, ev.time); break;
            case EventKind::SleepExpire: handle_sleep_expire(ev.entity, ev.gen, ev.time); break;
            case EventKind::BootComplete: handle_boot_complete(ev.entity, ev.gen, ev.time); break;
            case EventKind::WaitDeadline: handle_wait_deadline(ev.entity, ev.gen, ev.time); break;
            }
        }

        for (std::size_t s = 0; s < states_.size(); ++s) touch(s, cfg_.sim_time);
        res_.total_energy = ledger_.total_energy();
        for (const auto& per_sbs : ledger_.mode_time)
            for (std::size_t m = 0; m < kNumModes; ++m) res_.mode_time[m] += per_sbs[m];
        return res_;
    }

private:
    void schedule(double time, EventKind kind, std::size_t entity, std::uint64_t gen) {
        // lambda_s = 0 yields infinite sleep windows; those timers never fire.
        if (!std::isfinite(time)) return;
        queue_.push(Event{time, next_seq_++, kind, entity, gen});
    }

    void touch(std::size_t s, double now) {
        double lo = std::max(book_[s].last_touch, cfg_.warmup_time);
        double hi = std::min(now, cfg_.sim_time);
        if (hi > lo) accrue(ledger_, s, states_[s].mode, hi - lo, cfg_.profile);
        book_[s].last_touch = now;
    }

    void notify_transition(double now, std::size_t s, SbsMode from) {
        if (obs_ && from != states_[s].mode) obs_->on_transition(now, s, from, states_[s].mode);
    }

    void schedule_next_arrival(std::size_t u, double now) {
        UeState& ue = ues_[u];
        ue.gen++;
        double gap = ue.traffic.exponential(cfg_.lambda_u);
        ue.next_size = ue.traffic.exponential(1.0 / cfg_.mean_file_size);
        schedule(now + gap, EventKind::RequestArrival, u, ue.gen);
    }

    std::optional<std::size_t> nearest_idle(const Point& p) const {
        std::optional<std::size_t> best;
        double best_d2 = 0.0;
        for (std::size_t s = 0; s < states_.size(); ++s) {
            if (states_[s].mode != SbsMode::Idle) continue;
            double d2v = dist2(p, dep_.sbs[s]);
            if (d2v > r2_) continue;
            if (!best || d2v < best_d2) {
                best = s;
                best_d2 = d2v;
            }
        }
        return best;
    }

    void begin_session(std::size_t s, std::size_t u, double now) {
        UeState& ue = ues_[u];
        ue.waiting = false;
        std::vector<double> interferers;
        for (std::size_t j = 0; j < states_.size(); ++j)
            if (states_[j].mode == SbsMode::Active)
                interferers.push_back(dist(dep_.ue[u], dep_.sbs[j]));
        double rate = compute_rate(dist(dep_.ue[u], dep_.sbs[s]), interferers, cfg_);

        SbsMode from = states_[s].mode;
        touch(s, now);
        begin_service(states_[s]);
        notify_transition(now, s, from);
        book_[s].in_session = true;
        book_[s].session_ue = u;
        book_[s].session_size = ue.size;
        book_[s].session_arrival = ue.arrival_time;
        if (obs_) obs_->on_session_start(now, u, s, rate);
        schedule(now + ue.size / rate, EventKind::ServiceComplete, s, 0);
    }

    void resolve_blocked(std::size_t u, double now) {
        UeState& ue = ues_[u];
        ue.waiting = false;
        if (ue.arrival_time >= cfg_.warmup_time) {
            res_.request_count++;
            res_.blocked_count++;
        }
        if (obs_) obs_->on_resolved(now, u, false);
        schedule_next_arrival(u, now);
    }

    void serve_waiter(std::size_t s, double now) {
        std::optional<std::size_t> best;
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            if (!ues_[u].waiting) continue;
            if (dist2(dep_.ue[u], dep_.sbs[s]) > r2_) continue;
            if (!best || ues_[u].arrival_time < ues_[*best].arrival_time) best = u;
        }
        if (best) begin_session(s, *best, now);
    }

    void put_to_sleep(std::size_t s, double now) {
        double t_s = sched_rng_.exponential(cfg_.lambda_s);
        SbsMode from = states_[s].mode;
        touch(s, now);
        double boot_start = begin_sleep(states_[s], now, t_s, cfg_.profile);
        book_[s].sleep_gen++;
        notify_transition(now, s, from);
        schedule(boot_start, EventKind::SleepExpire, s, book_[s].sleep_gen);
    }

    std::vector<std::size_t> idle_ids(std::optional<std::size_t> excluded) const {
        std::vector<std::size_t> idle;
        for (std::size_t j = 0; j < states_.size(); ++j)
            if (states_[j].mode == SbsMode::Idle && (!excluded || j != *excluded))
                idle.push_back(j);
        return idle;
    }

    LoadSnapshot current_loads() const {
        std::vector<bool> awake(states_.size());
        for (std::size_t j = 0; j < states_.size(); ++j) awake[j] = is_awake(states_[j].mode);
        return compute_loads(dep_, awake);
    }

    // Default DLB load model: sample-moment fit over the awake SBS loads of
    // the initialization topology. Degenerate samples leave the rule fit-less
    // (the hop search then stops only at an empty annulus).
    void init_dlb_fit() {
        LoadSnapshot ls = current_loads();
        std::vector<double> samples;
        for (std::size_t s = 0; s < states_.size(); ++s)
            if (is_awake(states_[s].mode)) samples.push_back(ls.load[s]);
        const double nu_u = cfg_.rho_u * kPi * cfg_.r_th * cfg_.r_th;
        try {
            policy_.load_fit = fit_empirical(samples, nu_u);
        } catch (const std::invalid_argument&) {
        }
    }

    void snapshot_decision(double now) {
        if (!obs_) return;
        std::vector<SbsMode> modes(states_.size());
        for (std::size_t j = 0; j < states_.size(); ++j) modes[j] = states_[j].mode;
        obs_->on_decision_snapshot(now, dep_, modes);
    }

    std::optional<std::size_t> turn_off_pick(std::size_t self, double now) {
        std::vector<std::size_t> idle = idle_ids(self);
        if (idle.empty()) return std::nullopt;
        snapshot_decision(now);
        if (cfg_.scheduler == SchedulerKind::ROO) return roo_pick(idle, sched_rng_);
        LoadSnapshot ls = current_loads();
        if (cfg_.scheduler == SchedulerKind::DLB) {
            auto d = dlb_pick(self, dep_, idle, ls.load, policy_);
            auto c = clb_pick(idle, ls.load);
            if (d || c) {
                res_.dlb_decisions++;
                if (d && c && *d == *c) res_.dlb_clb_matches++;
            }
            return d;
        }
        // CLB proper, and WUC's maintenance decisions.
        return clb_pick(idle, ls.load);
    }

    // WUC repayment: the extra awake SBS is balanced by sleeping the
    // lowest-loaded idle one, the repaying SBS included.
    void wuc_compensate(double now) {
        std::vector<std::size_t> idle = idle_ids(std::nullopt);
        if (idle.empty()) return;
        snapshot_decision(now);
        auto pick = clb_pick(idle, current_loads().load);
        if (pick) put_to_sleep(*pick, now);
    }

    void natural_wake(std::size_t s, double now) {
        res_.wake_events++;
        int owed = std::min(1 + deficit_, 2);
        int executed = 0;
        while (executed < owed) {
            auto pick = turn_off_pick(s, now);
            if (!pick) break;
            put_to_sleep(*pick, now);
            executed++;
        }
        deficit_ = owed - executed;
        if (states_[s].mode == SbsMode::Idle) serve_waiter(s, now);
    }

    void try_wake_order(std::size_t u, double now) {
        auto cand = wuc_candidate(dep_.ue[u], dep_, states_, now, now + cfg_.w_t, cfg_.profile);
        if (!cand) return;
        std::size_t s = *cand;
        SbsMode from = states_[s].mode;
        touch(s, now);
        double done = wake_order(states_[s], now, cfg_.profile);
        book_[s].sleep_gen++;
        book_[s].reserved_ue = u;
        book_[s].reserved_ue_gen = ues_[u].gen;
        notify_transition(now, s, from);
        schedule(done, EventKind::BootComplete, s, book_[s].sleep_gen);
    }

    void handle_arrival(std::size_t u, std::uint64_t gen, double now) {
        UeState& ue = ues_[u];
        if (gen != ue.gen) return;
        ue.arrival_time = now;
        ue.size = ue.next_size;
        if (auto target = nearest_idle(dep_.ue[u])) {
            begin_session(*target, u, now);
            return;
        }
        if (cfg_.w_t <= 0.0) {
            resolve_blocked(u, now);
            return;
        }
        ue.waiting = true;
        schedule(now + cfg_.w_t, EventKind::WaitDeadline, u, ue.gen);
        if (cfg_.scheduler == SchedulerKind::WUC) try_wake_order(u, now);
    }

    void handle_service_complete(std::size_t s, double now) {
        SbsBook& bk = book_[s];
        std::size_t u = bk.session_ue;
        if (bk.session_arrival >= cfg_.warmup_time) {
            res_.request_count++;
            res_.served_count++;
            res_.total_bits += bk.session_size;
        }
        bk.in_session = false;
        SbsMode from = states_[s].mode;
        touch(s, now);
        end_service(states_[s]);
        notify_transition(now, s, from);
        if (obs_) obs_->on_resolved(now, u, true);
        schedule_next_arrival(u, now);
        if (bk.wuc_pending) {
            bk.wuc_pending = false;
            wuc_compensate(now);
        }
        if (states_[s].mode == SbsMode::Idle) serve_waiter(s, now);
    }

    void handle_sleep_expire(std::size_t s, std::uint64_t gen, double now) {
        if (gen != book_[s].sleep_gen) return;
        SbsMode from = states_[s].mode;
        touch(s, now);
        double done = start_scheduled_boot(states_[s], now, cfg_.profile);
        notify_transition(now, s, from);
        schedule(done, EventKind::BootComplete, s, book_[s].sleep_gen);
    }

    void handle_boot_complete(std::size_t s, std::uint64_t gen, double now) {
        if (gen != book_[s].sleep_gen) return;
        bool was_reserved = states_[s].reserved;
        SbsMode from = states_[s].mode;
        touch(s, now);
        finish_boot(states_[s], now);
        states_[s].reserved = false;
        notify_transition(now, s, from);
        if (!was_reserved) {
            natural_wake(s, now);
            return;
        }
        SbsBook& bk = book_[s];
        std::size_t ru = bk.reserved_ue;
        if (ues_[ru].waiting && ues_[ru].gen == bk.reserved_ue_gen) {
            bk.wuc_pending = true;
            begin_session(s, ru, now);
        } else {
            // Trigger resolved while booting; repay immediately.
            wuc_compensate(now);
            if (states_[s].mode == SbsMode::Idle) serve_waiter(s, now);
        }
    }

    void handle_wait_deadline(std::size_t u, std::uint64_t gen, double now) {
        if (gen != ues_[u].gen || !ues_[u].waiting) return;
        resolve_blocked(u, now);
    }

    const SimConfig cfg_;
    const Deployment dep_;
    SimObserver* obs_;
    RandomStream sched_rng_;
    double r2_;
    SchedulerPolicy policy_;
    std::vector<UeState> ues_;
    std::vector<SbsState> states_;
    std::vector<SbsBook> book_;
    EnergyLedger ledger_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    int deficit_ = 0;
    RunResult res_;
};

} // namespace

RunResult run_replication_on(const SimConfig& cfg, const Deployment& dep, long rep_index,
                             SimObserver* observer, const std::optional<GammaMixtureFit>& analytic_fit) {
    cfg.validate();
    dep.validate();
    if (rep_index < 0) throw std::invalid_argument("run_replication_on: rep_index must be >= 0");
    if (dep.r_th != cfg.r_th || dep.region_radius != cfg.region_radius)
        throw std::invalid_argument("run_replication_on: deployment geometry disagrees with config");
    std::optional<GammaMixtureFit> fit = analytic_fit;
    if (!fit && cfg.scheduler == SchedulerKind::DLB && cfg.dlb_analytic_fit)
        fit = analytic_load_fit(cfg);
    Simulation sim(cfg, dep, rep_index, observer, fit);
    return sim.run();
}

RunResult run_replication(const SimConfig& cfg, long rep_index, SimObserver* observer,
                          const std::optional<GammaMixtureFit>& analytic_fit) {
    cfg.validate();
    if (rep_index < 0) throw std::invalid_argument("run_replication: rep_index must be >= 0");
    RandomStream dep_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep_index), 1));
    Deployment dep;
    dep.r_th = cfg.r_th;
    dep.region_radius = cfg.region_radius;
    dep.sbs = sample_hppp(cfg.rho_c, cfg.region_radius, dep_rng);
    dep.ue = sample_hppp(cfg.rho_u, cfg.region_radius, dep_rng);
    return run_replication_on(cfg, dep, rep_index, observer, analytic_fit);
}

std::vector<RunResult> run_many(const SimConfig& cfg, int workers) {
    cfg.validate();
    std::optional<GammaMixtureFit> fit;
    if (cfg.scheduler == SchedulerKind::DLB && cfg.dlb_analytic_fit) fit = analytic_load_fit(cfg);

    const long n = cfg.replications;
    std::vector<RunResult> out(static_cast<std::size_t>(n));
    if (workers <= 1) {
        for (long r = 0; r < n; ++r) out[static_cast<std::size_t>(r)] = run_replication(cfg, r, nullptr, fit);
        return out;
    }

    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto work = [&] {
        for (;;) {
            long r = next.fetch_add(1);
            if (r >= n) return;
            try {
                out[static_cast<std::size_t>(r)] = run_replication(cfg, r, nullptr, fit);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    long n_threads = std::min<long>(workers, n);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (long i = 0; i < n_threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

} // namespace scn
