#include "scn/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scn {

const char* mode_name(SbsMode m) {
    switch (m) {
        case SbsMode::Active: return "active";
        case SbsMode::Idle: return "idle";
        case SbsMode::Standby: return "standby";
        case SbsMode::Sleep: return "sleep";
        case SbsMode::Off: return "off";
        case SbsMode::BootingUp: return "boot";
    }
    return "?";
}

void PowerProfile::validate() const {
    for (double p : power)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("PowerProfile: power fractions must lie in [0, 1]");
    for (double b : boot_time)
        if (!(b >= 0.0) || !std::isfinite(b))
            throw std::invalid_argument("PowerProfile: boot times must be non-negative");
}

SbsMode select_sleep_state(double t_s, const PowerProfile& profile) {
    if (!(t_s > 0.0)) throw std::invalid_argument("select_sleep_state: sleep time must be positive");
    const double boot_sleep = boot_time(profile, SbsMode::Sleep);
    const double boot_off = boot_time(profile, SbsMode::Off);
    if (t_s <= boot_sleep) return SbsMode::Standby;
    if (t_s <= boot_off) return SbsMode::Sleep;
    const double p_boot = power_fraction(profile, SbsMode::BootingUp);
    const double cost_sleep =
        (t_s - boot_sleep) * power_fraction(profile, SbsMode::Sleep) + boot_sleep * p_boot;
    const double cost_off =
        (t_s - boot_off) * power_fraction(profile, SbsMode::Off) + boot_off * p_boot;
    return cost_sleep < cost_off ? SbsMode::Sleep : SbsMode::Off;
}

double begin_sleep(SbsState& state, double now, double t_s, const PowerProfile& profile) {
    if (state.mode != SbsMode::Idle)
        throw std::logic_error("begin_sleep: only an Idle SBS can be turned off");
    const SbsMode target = select_sleep_state(t_s, profile);
    state.mode = target;
    state.sleep_expiry = now + t_s;
    state.reserved = false;
    return std::max(now, state.sleep_expiry - boot_time(profile, target));
}

double start_scheduled_boot(SbsState& state, double now, const PowerProfile& profile) {
    if (!is_sleeping(state.mode))
        throw std::logic_error("start_scheduled_boot: SBS is not sleeping");
    const double bt = boot_time(profile, state.mode);
    state.boot_complete = std::max(state.sleep_expiry, now + bt);
    state.mode = SbsMode::BootingUp;
    return state.boot_complete;
}

double wake_order(SbsState& state, double now, const PowerProfile& profile) {
    if (!is_sleeping(state.mode)) throw std::logic_error("wake_order: SBS is not sleeping");
    if (state.reserved) throw std::logic_error("wake_order: SBS already reserved");
    state.reserved = true;
    state.boot_complete = now + boot_time(profile, state.mode);
    state.mode = SbsMode::BootingUp;
    return state.boot_complete;
}

void finish_boot(SbsState& state, double) {
    if (state.mode != SbsMode::BootingUp) throw std::logic_error("finish_boot: SBS is not booting");
    state.mode = SbsMode::Idle;
}

void begin_service(SbsState& state) {
    if (state.mode != SbsMode::Idle) throw std::logic_error("begin_service: SBS is not idle");
    state.mode = SbsMode::Active;
}

void end_service(SbsState& state) {
    if (state.mode != SbsMode::Active) throw std::logic_error("end_service: SBS is not active");
    state.mode = SbsMode::Idle;
}

void EnergyLedger::init(std::size_t n_sbs) {
    energy.assign(n_sbs, 0.0);
    mode_time.assign(n_sbs, {});
}

double EnergyLedger::total_energy() const {
    double t = 0.0;
    for (double e : energy) t += e;
    return t;
}

void accrue(EnergyLedger& ledger, std::size_t sbs, SbsMode mode, double duration,
            const PowerProfile& profile) {
    if (duration < 0.0) throw std::invalid_argument("accrue: negative duration");
    ledger.energy[sbs] += duration * power_fraction(profile, mode);
    ledger.mode_time[sbs][static_cast<std::size_t>(mode)] += duration;
}

} // namespace scn
