#pragma once

#include "aoii/absorbing.hpp"
#include "aoii/generator.hpp"
#include "aoii/push.hpp"

namespace aoii {

// Monitor-initiated sampling: pull requests arrive as a Poisson process
// with rate request_rate[i] while the estimate is i. Rates may be zero;
// an all-zero policy is accepted here and surfaces downstream as a
// ReducibleChain (the sync-point chain degenerates).
struct PullPolicy {
    Vec request_rate; // per-state, nonnegative
};

void validate(const PullPolicy &policy, int states);

// Absorbing chain of the out-of-sync excursion of cycle `state` under
// pull-based sampling. Transient states are pairs (j, l) with l = 0
// (waiting for a pull) or l = 1 (transmitting), ordered layer-major:
// all (j, 0) then all (j, 1). A source jump during transmission returns
// to the waiting layer at the new source value. Absorbing states are the
// N sync values.
AbsorbingChain build_pull_cycle_chain(const GeneratorMatrix &q, int state,
                                      const PullPolicy &policy,
                                      const ChannelModel &channel);

// Two-transient-state chain of the in-sync stretch: waiting (pull rate
// lambda) and transmitting (completion rate mu), absorbed when the source
// jumps away (rate sigma). Expected visits to the transmitting state count
// the redundant in-sync transmissions.
AbsorbingChain build_insync_chain(double sigma, double lambda, double mu);

// Closed form for the expected in-sync transmissions per cycle:
// lambda (mu + sigma) / (lambda sigma + sigma mu + sigma^2).
double insync_transmissions(double sigma, double lambda, double mu);

// Cycle statistics for cycle `state`: area/duration/sp_row as in the push
// model; samples adds the in-sync closed form to the expected visits of
// the transmitting layer.
CycleStats pull_cycle_stats(const GeneratorMatrix &q, int state,
                            const PullPolicy &policy,
                            const ChannelModel &channel);

} // namespace aoii
