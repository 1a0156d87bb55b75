#include "aoii/pull.hpp"

#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii {

void validate(const PullPolicy &policy, int states) {
    std::vector<Violation> violations;
    if (policy.request_rate.size() != states) {
        std::ostringstream os;
        os << "request_rate has " << policy.request_rate.size()
           << " entries, source has " << states << " states";
        violations.push_back({ViolationCode::InvalidParameter, -1, -1, os.str()});
        throw ValidationError(std::move(violations));
    }
    for (int i = 0; i < states; ++i) {
        const double r = policy.request_rate[i];
        if (!(r >= 0) || !std::isfinite(r)) {
            std::ostringstream os;
            os << "request_rate[" << i << "] = " << r
               << " must be nonnegative and finite";
            violations.push_back(
                {ViolationCode::InvalidParameter, i, -1, os.str()});
        }
    }
    if (!violations.empty())
        throw ValidationError(std::move(violations));
    // All-zero rates are accepted here; the sync-point chain degenerates
    // downstream and is reported as ReducibleChain by the metrics layer.
}

AbsorbingChain build_pull_cycle_chain(const GeneratorMatrix &q, int state,
                                      const PullPolicy &policy,
                                      const ChannelModel &channel) {
    const int n = q.size();
    validate(policy, n);
    validate(channel);
    if (state < 0 || state >= n)
        throw ValidationError(
            {{ViolationCode::InvalidParameter, -1, -1, "cycle state index out of range"}});

    const int m = n - 1;
    const int k1 = 2 * m; // layer-major: all (j,0) then all (j,1)
    const double lambda = policy.request_rate[state];

    const Mat q_minor = q.submatrix_excluding(state);
    const Vec into = q.rates_into(state);
    const RowVec from = q.rates_from(state);
    const Mat q_offdiag = q_minor - Mat(q_minor.diagonal().asDiagonal());

    Mat a = Mat::Zero(k1, k1);
    Mat b = Mat::Zero(k1, n);
    RowVec beta = RowVec::Zero(k1);

    // waiting layer: source wanders, pull requests arrive at rate lambda
    a.block(0, 0, m, m) = q_minor;
    a.block(0, 0, m, m).diagonal().array() -= lambda;
    a.block(0, m, m, m).diagonal().array() += lambda;
    // transmitting layer: a source jump preempts and returns to waiting
    a.block(m, 0, m, m) = q_offdiag;
    a.block(m, m, m, m) = Mat(q_minor.diagonal().asDiagonal());
    a.block(m, m, m, m).diagonal().array() -= channel.mu;

    std::vector<int> value_of(m);
    for (int j = 0, r = 0; j < n; ++j)
        if (j != state)
            value_of[r++] = j;

    std::vector<std::string> transient_labels(k1);
    std::vector<std::string> absorbing_labels(n);
    for (int j = 0; j < n; ++j)
        absorbing_labels[j] = "S" + std::to_string(j);

    for (int r = 0; r < m; ++r) {
        const int j = value_of[r];
        b(r, state) = into[r];
        b(m + r, state) = into[r];
        b(m + r, j) = channel.mu;
        transient_labels[r] = "(j=" + std::to_string(j) + ",l=0)";
        transient_labels[m + r] = "(j=" + std::to_string(j) + ",l=1)";
    }

    const double sigma = q.sigma(state);
    for (int r = 0; r < m; ++r)
        beta[r] = from[r] / sigma;

    return make_absorbing_chain(std::move(a), std::move(b), std::move(beta),
                                std::move(transient_labels),
                                std::move(absorbing_labels));
}

AbsorbingChain build_insync_chain(double sigma, double lambda, double mu) {
    if (!(sigma > 0) || !std::isfinite(sigma))
        throw ValidationError({{ViolationCode::InvalidParameter, -1, -1,
                                "sigma must be strictly positive and finite"}});
    if (!(lambda >= 0) || !(mu > 0))
        throw ValidationError({{ViolationCode::InvalidParameter, -1, -1,
                                "require lambda >= 0 and mu > 0"}});

    Mat a(2, 2);
    a << -sigma - lambda, lambda, mu, -mu - sigma;
    Mat b(2, 1);
    b << sigma, sigma;
    RowVec beta(2);
    beta << 1.0, 0.0;
    return make_absorbing_chain(std::move(a), std::move(b), std::move(beta),
                                {"wait", "transmit"}, {"desync"});
}

double insync_transmissions(double sigma, double lambda, double mu) {
    return lambda * (mu + sigma) / (lambda * sigma + sigma * mu + sigma * sigma);
}

CycleStats pull_cycle_stats(const GeneratorMatrix &q, int state,
                            const PullPolicy &policy,
                            const ChannelModel &channel) {
    const AbsorbingChain chain = build_pull_cycle_chain(q, state, policy, channel);
    const int m = q.size() - 1;

    CycleStats stats;
    stats.aoii_area = half_second_moment_absorption_time(chain);
    stats.duration = mean_absorption_time(chain) + 1.0 / q.sigma(state);
    stats.sp_row = absorption_probabilities(chain);

    // Out-of-sync transmission starts are visits to the transmitting layer;
    // redundant in-sync transmissions add the closed-form term.
    Vec indicator = Vec::Zero(2 * m);
    indicator.tail(m).setOnes();
    stats.samples = expected_visits(chain, indicator) +
                    insync_transmissions(q.sigma(state),
                                         policy.request_rate[state], channel.mu);
    return stats;
}

} // namespace aoii
