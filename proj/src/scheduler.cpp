#include "scn/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scn {

const char* scheduler_name(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::ROO: return "roo";
        case SchedulerKind::CLB: return "clb";
        case SchedulerKind::DLB: return "dlb";
        case SchedulerKind::WUC: return "wuc";
    }
    return "?";
}

std::optional<SchedulerKind> scheduler_from_name(const std::string& name) {
    if (name == "roo") return SchedulerKind::ROO;
    if (name == "clb") return SchedulerKind::CLB;
    if (name == "dlb") return SchedulerKind::DLB;
    if (name == "wuc") return SchedulerKind::WUC;
    return std::nullopt;
}

void SchedulerPolicy::validate() const {
    if (kind == SchedulerKind::DLB) {
        if (!(kappa > 0.0 && kappa < 1.0))
            throw std::invalid_argument("SchedulerPolicy: kappa must lie in (0, 1)");
        if (max_hops < 1) throw std::invalid_argument("SchedulerPolicy: max_hops must be >= 1");
    }
}

std::vector<std::size_t> initial_sleepers(const Deployment& dep, double on_ratio,
                                          SchedulerKind kind, RandomStream& rng) {
    if (!(on_ratio > 0.0 && on_ratio <= 1.0))
        throw std::invalid_argument("initial_sleepers: on_ratio must lie in (0, 1]");
    const std::size_t n = dep.sbs.size();
    const std::size_t n_sleep =
        static_cast<std::size_t>(std::llround((1.0 - on_ratio) * static_cast<double>(n)));
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    if (kind == SchedulerKind::ROO || kind == SchedulerKind::WUC) {
        for (std::size_t i = 0; i < n_sleep; ++i)
            std::swap(ids[i], ids[i + rng.index(n - i)]);
    } else {
        const std::vector<double> load = compute_loads(dep, std::vector<bool>(n, true)).load;
        std::stable_sort(ids.begin(), ids.end(),
                         [&](std::size_t a, std::size_t b) { return load[a] < load[b]; });
    }
    ids.resize(n_sleep);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<std::size_t> roo_pick(const std::vector<std::size_t>& idle, RandomStream& rng) {
    if (idle.empty()) return std::nullopt;
    return idle[rng.index(idle.size())];
}

std::optional<std::size_t> clb_pick(const std::vector<std::size_t>& idle,
                                    const std::vector<double>& loads) {
    std::optional<std::size_t> best;
    for (std::size_t id : idle)
        if (!best || loads[id] < loads[*best]) best = id;
    return best;
}

std::optional<std::size_t> dlb_pick(std::size_t decision_maker, const Deployment& dep,
                                    const std::vector<std::size_t>& idle,
                                    const std::vector<double>& loads,
                                    const SchedulerPolicy& policy) {
    policy.validate();
    const Point& origin = dep.sbs[decision_maker];
    std::optional<std::size_t> best;
    double best_load = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= policy.max_hops; ++k) {
        const double lo = (k - 1) * dep.r_th;
        const double hi = k * dep.r_th;
        for (std::size_t id : idle) {
            const double d = dist(dep.sbs[id], origin);
            if (d > hi || (k > 1 && d <= lo)) continue;
            if (loads[id] < best_load) {
                best_load = loads[id];
                best = id;
            }
        }
        if (k == policy.max_hops) break;
        std::size_t n_next = 0;
        for (std::size_t id : idle) {
            const double d = dist(dep.sbs[id], origin);
            if (d > hi && d <= hi + dep.r_th) ++n_next;
        }
        if (policy.load_fit) {
            if (dlb_should_stop(best_load, n_next, policy.kappa, *policy.load_fit)) break;
        } else if (n_next == 0) {
            break;
        }
    }
    return best;
}

std::optional<std::size_t> wuc_candidate(const Point& ue, const Deployment& dep,
                                         const std::vector<SbsState>& states, double now,
                                         double deadline, const PowerProfile& profile) {
    std::optional<std::size_t> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    const double r2 = dep.r_th * dep.r_th;
    for (std::size_t i = 0; i < dep.sbs.size(); ++i) {
        const SbsState& s = states[i];
        if (!is_sleeping(s.mode) || s.reserved) continue;
        if (now + boot_time(profile, s.mode) > deadline) continue;
        const double d2 = dist2(ue, dep.sbs[i]);
        if (d2 > r2) continue;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

} // namespace scn
