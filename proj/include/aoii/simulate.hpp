#pragma once

#include <cstdint>
#include <iosfwd>

#include "aoii/pull.hpp"
#include "aoii/push.hpp"

namespace aoii {

// Run length: either a target number of completed (post-warmup) cycles or
// a total simulated-time budget.
struct Horizon {
    enum class Kind { Cycles, Time };
    Kind kind = Kind::Cycles;
    std::uint64_t cycle_target = 100000;
    double time_target = 0;

    static Horizon cycles(std::uint64_t n) { return {Kind::Cycles, n, 0}; }
    static Horizon time(double t) { return {Kind::Time, 0, t}; }
};

struct SimConfig {
    Horizon horizon;
    std::uint64_t seed = 1;
    double warmup = 0.1; // initial fraction of the horizon discarded
    int replications = 1;
    // Re-derive the AoII area of every cycle from its excursion length and
    // fail loudly on mismatch; off by default.
    bool check_invariants = false;
    // Optional event trace sink (CSV: time,event,x,xhat,aoii); null = off.
    std::ostream *trace = nullptr;
};

void validate(const SimConfig &cfg);

struct SimResult {
    double aoii_hat = 0; // time-average AoII over collected cycles
    double aoii_se = 0;
    double rate_hat = 0; // transmissions started per unit time
    double rate_se = 0;
    std::uint64_t cycles = 0; // collected (post-warmup) completed cycles

    // Per starting sync value: empirical stationary frequencies and cycle
    // means, indexed by state.
    RowVec pi_hat;
    Vec area_hat;
    Vec duration_hat;
    Vec samples_hat;
    Mat sp_transition_counts; // N x N counts of sync-value transitions

    // Set when the run could not produce meaningful statistics: zero
    // transmissions ever started, or the cycle target was unreachable.
    bool degenerate = false;
};

// Event-driven simulation of the exact push protocol: competing exponential
// clocks for source jumps, Erlang stage advances (restarted at every sync
// point, persistent across mid-excursion source jumps), and transmission
// completion with preempt-and-resample. Deterministic for a fixed config:
// replication r draws from an mt19937_64 seeded with splitmix64(seed + r).
SimResult simulate_push(const GeneratorMatrix &q, const PushPolicy &policy,
                        const ChannelModel &channel, const SimConfig &cfg);

// Pull protocol: adds a Poisson pull clock at the estimate's request rate;
// pulls during an ongoing transmission are ignored; a preempted
// transmission waits for a fresh pull; in-sync transmissions count toward
// the sampling rate only.
SimResult simulate_pull(const GeneratorMatrix &q, const PullPolicy &policy,
                        const ChannelModel &channel, const SimConfig &cfg);

} // namespace aoii
