#pragma once

#include "aoii/absorbing.hpp"
#include "aoii/generator.hpp"
#include "aoii/linalg.hpp"

namespace aoii {

// Exponential transmission channel with completion rate mu.
struct ChannelModel {
    double mu = 1.0;
};

// Sensor-initiated sampling: while the estimate is i, the sensor transmits
// once the age of incorrect information exceeds an Erlang-k threshold with
// mean mean_threshold[i]. The internal stage rate is k / mean_threshold[i],
// so the policy is parameterized directly by the mean.
struct PushPolicy {
    int k = 1;
    Vec mean_threshold; // per-state, strictly positive

    double stage_rate(int state) const { return k / mean_threshold[state]; }
};

// Per-cycle quantities of the synchronization-point renewal structure.
struct CycleStats {
    double aoii_area = 0;  // expected area under AoII over the cycle
    double duration = 0;   // expected cycle length, includes in-sync holding
    double samples = 0;    // expected transmissions started per cycle
    RowVec sp_row;         // transition probabilities to the next sync value
};

void validate(const ChannelModel &channel);
void validate(const PushPolicy &policy, int states);

// Absorbing chain of the out-of-sync excursion of cycle `state` under
// push-based sampling. Transient states are pairs (j, l) with j != state
// the current source value and l in 0..k the threshold stage (l = k means
// a transmission is in flight). Ordering is stage-major: block l holds the
// (j, l) in ascending j. Absorbing states are the N sync values.
AbsorbingChain build_push_cycle_chain(const GeneratorMatrix &q, int state,
                                      const PushPolicy &policy,
                                      const ChannelModel &channel);

// Cycle statistics for cycle `state`: area and duration from the first two
// phase-type moments, sp_row from the absorption probabilities, samples
// from the expected visits to stage-k states (each entry into or lateral
// move within stage k is a fresh transmission).
CycleStats push_cycle_stats(const GeneratorMatrix &q, int state,
                            const PushPolicy &policy,
                            const ChannelModel &channel);

} // namespace aoii
