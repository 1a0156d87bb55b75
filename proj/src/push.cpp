#include "aoii/push.hpp"

#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii {

namespace {

void fail(const std::string &detail) {
    throw ValidationError({{ViolationCode::InvalidParameter, -1, -1, detail}});
}

} // namespace

void validate(const ChannelModel &channel) {
    if (!(channel.mu > 0) || !std::isfinite(channel.mu))
        fail("channel rate mu must be strictly positive and finite");
}

void validate(const PushPolicy &policy, int states) {
    if (policy.k < 1)
        fail("Erlang order k must be >= 1");
    if (policy.mean_threshold.size() != states) {
        std::ostringstream os;
        os << "mean_threshold has " << policy.mean_threshold.size()
           << " entries, source has " << states << " states";
        fail(os.str());
    }
    for (int i = 0; i < states; ++i) {
        const double t = policy.mean_threshold[i];
        if (!(t > 0) || !std::isfinite(t)) {
            std::ostringstream os;
            os << "mean_threshold[" << i << "] = " << t
               << " must be strictly positive and finite";
            fail(os.str());
        }
    }
}

AbsorbingChain build_push_cycle_chain(const GeneratorMatrix &q, int state,
                                      const PushPolicy &policy,
                                      const ChannelModel &channel) {
    const int n = q.size();
    validate(policy, n);
    validate(channel);
    if (state < 0 || state >= n)
        fail("cycle state index out of range");

    const int k = policy.k;
    const int m = n - 1;          // out-of-sync source values
    const int k1 = (k + 1) * m;   // transient states, stage-major
    const double stage_rate = policy.stage_rate(state);

    const Mat q_minor = q.submatrix_excluding(state);
    const Vec into = q.rates_into(state);
    const RowVec from = q.rates_from(state);

    Mat a = Mat::Zero(k1, k1);
    Mat b = Mat::Zero(k1, n);
    RowVec beta = RowVec::Zero(k1);

    std::vector<std::string> transient_labels(k1);
    std::vector<std::string> absorbing_labels(n);
    for (int j = 0; j < n; ++j)
        absorbing_labels[j] = "S" + std::to_string(j);

    // actual source values in block order (all j != state, ascending)
    std::vector<int> value_of(m);
    for (int j = 0, r = 0; j < n; ++j)
        if (j != state)
            value_of[r++] = j;

    for (int l = 0; l <= k; ++l) {
        const int off = l * m;
        const double leak = (l < k) ? stage_rate : channel.mu;
        a.block(off, off, m, m) = q_minor;
        a.block(off, off, m, m).diagonal().array() -= leak;
        if (l < k)
            a.block(off, off + m, m, m).diagonal().array() += stage_rate;
        for (int r = 0; r < m; ++r) {
            const int j = value_of[r];
            b(off + r, state) = into[r]; // source jumps back to the estimate
            if (l == k)
                b(off + r, j) = channel.mu; // transmission completes at j
            transient_labels[off + r] =
                "(j=" + std::to_string(j) + ",l=" + std::to_string(l) + ")";
        }
    }

    const double sigma = q.sigma(state);
    for (int r = 0; r < m; ++r)
        beta[r] = from[r] / sigma;

    return make_absorbing_chain(std::move(a), std::move(b), std::move(beta),
                                std::move(transient_labels),
                                std::move(absorbing_labels));
}

CycleStats push_cycle_stats(const GeneratorMatrix &q, int state,
                            const PushPolicy &policy,
                            const ChannelModel &channel) {
    const AbsorbingChain chain = build_push_cycle_chain(q, state, policy, channel);
    const int m = q.size() - 1;
    const int k1 = chain.transient_count();

    CycleStats stats;
    stats.aoii_area = half_second_moment_absorption_time(chain);
    stats.duration = mean_absorption_time(chain) + 1.0 / q.sigma(state);
    stats.sp_row = absorption_probabilities(chain);

    // Every visit to a stage-k state is a transmission start: the first
    // entry samples, and each lateral (j,k) -> (j',k) move is a preemptive
    // resample.
    Vec indicator = Vec::Zero(k1);
    indicator.tail(m).setOnes();
    stats.samples = expected_visits(chain, indicator);
    return stats;
}

} // namespace aoii
