#pragma once

#include <variant>
#include <vector>

#include "aoii/pull.hpp"
#include "aoii/push.hpp"

namespace aoii {

// Embedded DTMC over synchronization values plus the per-cycle statistics
// needed to turn its stationary vector into long-run system metrics.
struct SpChain {
    Mat p;                        // N x N row-stochastic transitions
    std::vector<CycleStats> stats; // per starting sync value
};

struct SystemMetrics {
    double aoii = 0; // long-run mean age of incorrect information
    double rate = 0; // long-run transmissions per unit time
    RowVec pi;       // stationary vector of the sync-point chain
};

// Solves pi = 1^T (P + 1 1^T - I)^{-1} and verifies the residual
// ||pi P - pi||_inf < 1e-9. Throws ReducibleChain when the system is
// numerically singular or the residual check fails.
RowVec stationary_distribution(const Mat &p);

// AoII = sum_i pi_i a_i / sum_i pi_i d_i, R = sum_i pi_i r_i / sum_i pi_i d_i.
SystemMetrics system_metrics(const SpChain &chain);

using Policy = std::variant<PushPolicy, PullPolicy>;

// Full analytical pipeline: per-cycle chains and statistics for every sync
// value, the sync-point transition matrix, its stationary vector, and the
// system metrics. Deterministic; upstream errors are annotated with the
// offending cycle index.
SystemMetrics analyze(const GeneratorMatrix &q, const PushPolicy &policy,
                      const ChannelModel &channel);
SystemMetrics analyze(const GeneratorMatrix &q, const PullPolicy &policy,
                      const ChannelModel &channel);
SystemMetrics analyze(const GeneratorMatrix &q, const Policy &policy,
                      const ChannelModel &channel);

// The assembled chain itself, for callers that need P or per-cycle stats.
SpChain build_sp_chain(const GeneratorMatrix &q, const Policy &policy,
                       const ChannelModel &channel);

} // namespace aoii
