#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scn/geometry.hpp"
#include "scn/load_model.hpp"
#include "scn/power_model.hpp"
#include "scn/rng.hpp"

namespace scn {

enum class SchedulerKind { ROO, CLB, DLB, WUC };

const char* scheduler_name(SchedulerKind k);
std::optional<SchedulerKind> scheduler_from_name(const std::string& name);

struct SchedulerPolicy {
    SchedulerKind kind = SchedulerKind::ROO;
    double kappa = 0.3;
    int max_hops = 3;
    // DLB's load model; without one the search only stops on an empty next
    // hop (or the hop cap).
    std::optional<GammaMixtureFit> load_fit;
    void validate() const;
};

// SBS ids put to sleep at initialization: round((1-on_ratio)*N) of them,
// chosen uniformly for ROO/WUC and lowest all-awake load (ties by id) for
// CLB/DLB. Returned sorted ascending.
std::vector<std::size_t> initial_sleepers(const Deployment& dep, double on_ratio,
                                          SchedulerKind kind, RandomStream& rng);

// Uniform pick from the eligible idle set; nullopt when empty.
std::optional<std::size_t> roo_pick(const std::vector<std::size_t>& idle, RandomStream& rng);

// Load argmin over the eligible idle set, ties by lowest id.
std::optional<std::size_t> clb_pick(const std::vector<std::size_t>& idle,
                                    const std::vector<double>& loads);

// Hop-limited distributed search from the decision maker: hop k covers idle
// SBSs within k*r_th, expansion stops via the CDF rule on the next annulus's
// idle count or at max_hops.
std::optional<std::size_t> dlb_pick(std::size_t decision_maker, const Deployment& dep,
                                    const std::vector<std::size_t>& idle,
                                    const std::vector<double>& loads,
                                    const SchedulerPolicy& policy);

// Nearest unreserved sleeping SBS within r_th of the UE that can finish
// booting by the deadline; ties by id.
std::optional<std::size_t> wuc_candidate(const Point& ue, const Deployment& dep,
                                         const std::vector<SbsState>& states, double now,
                                         double deadline, const PowerProfile& profile);

} // namespace scn
