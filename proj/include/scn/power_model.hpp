#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace scn {

enum class SbsMode { Active, Idle, Standby, Sleep, Off, BootingUp };

inline constexpr std::size_t kNumModes = 6;

const char* mode_name(SbsMode m);

// Per-mode power draw as a fraction of P_max and boot-up latency back to
// Idle. Booting draws standby power.
struct PowerProfile {
    std::array<double, kNumModes> power{1.0, 0.5, 0.5, 0.15, 0.0, 0.5};
    std::array<double, kNumModes> boot_time{0.0, 0.0, 0.5, 10.0, 30.0, 0.0};
    void validate() const;
};

inline double power_fraction(const PowerProfile& p, SbsMode m) {
    return p.power[static_cast<std::size_t>(m)];
}
inline double boot_time(const PowerProfile& p, SbsMode m) {
    return p.boot_time[static_cast<std::size_t>(m)];
}

struct SbsState {
    SbsMode mode = SbsMode::Idle;
    double sleep_expiry = 0.0;  // meaningful while in Standby/Sleep/Off
    double boot_complete = 0.0; // meaningful while BootingUp
    bool reserved = false;      // WUC wake order pending on this SBS
};

inline bool is_sleeping(SbsMode m) {
    return m == SbsMode::Standby || m == SbsMode::Sleep || m == SbsMode::Off;
}
inline bool is_awake(SbsMode m) { return m == SbsMode::Active || m == SbsMode::Idle; }

// Cheapest state that can cover a sleep window of t_s seconds and still be
// Idle when it ends: Standby when the window is shorter than Sleep's boot,
// Sleep up to Off's boot, beyond that whichever of Sleep/Off costs less over
// the window (ties go to the deeper state).
SbsMode select_sleep_state(double t_s, const PowerProfile& profile);

// Puts an Idle SBS to sleep for t_s seconds. Returns the boot start time,
// sleep_expiry - boot_time, clamped to now for windows shorter than the boot
// (the SBS then returns slightly after the window).
double begin_sleep(SbsState& state, double now, double t_s, const PowerProfile& profile);

// Scheduled wake path: at the boot start time the sleeping SBS begins booting
// toward its expiry. Returns the boot completion time.
double start_scheduled_boot(SbsState& state, double now, const PowerProfile& profile);

// WUC wake order: immediately boots a sleeping, unreserved SBS and marks it
// reserved. Returns the boot completion time now + boot_time(current mode).
double wake_order(SbsState& state, double now, const PowerProfile& profile);

// BootingUp -> Idle; the reservation flag is left for the caller to resolve.
void finish_boot(SbsState& state, double now);

// Idle <-> Active around service.
void begin_service(SbsState& state);
void end_service(SbsState& state);

struct EnergyLedger {
    std::vector<double> energy; // per SBS, P_max * seconds
    std::vector<std::array<double, kNumModes>> mode_time;

    void init(std::size_t n_sbs);
    double total_energy() const;
};

void accrue(EnergyLedger& ledger, std::size_t sbs, SbsMode mode, double duration,
            const PowerProfile& profile);

} // namespace scn
