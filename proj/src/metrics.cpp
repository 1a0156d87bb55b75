#include "aoii/metrics.hpp"

#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii {

namespace {
constexpr double kResidualTol = 1e-9;
}

RowVec stationary_distribution(const Mat &p) {
    const auto n = p.rows();
    if (p.cols() != n || n < 1)
        throw ValidationError({{ViolationCode::NonSquare, -1, -1,
                                "transition matrix must be square"}});

    // pi = 1^T (P + 1 1^T - I)^{-1}, solved as M^T pi^T = 1.
    const Mat m = p + Mat::Ones(n, n) - Mat::Identity(n, n);
    Eigen::PartialPivLU<Mat> lu(m.transpose());
    const double rc = lu.rcond();
    if (!(rc > kSingularRcond)) {
        std::ostringstream os;
        os << "sync-point chain has no unique stationary vector (rcond "
           << rc << ")";
        throw ReducibleChain(os.str());
    }
    const Vec x = lu.solve(Vec::Ones(n));
    const RowVec pi = x.transpose();

    const double residual = (pi * p - pi).cwiseAbs().maxCoeff();
    if (!(residual < kResidualTol) || !(pi.minCoeff() > -kResidualTol)) {
        std::ostringstream os;
        os << "stationary residual " << residual
           << " exceeds tolerance or vector has negative mass";
        throw ReducibleChain(os.str());
    }
    return pi;
}

SystemMetrics system_metrics(const SpChain &chain) {
    const auto n = chain.p.rows();
    if (static_cast<int>(chain.stats.size()) != n)
        throw ValidationError({{ViolationCode::InvalidParameter, -1, -1,
                                "per-cycle stats count differs from chain size"}});

    SystemMetrics out;
    out.pi = stationary_distribution(chain.p);
    double area = 0, duration = 0, samples = 0;
    for (int i = 0; i < n; ++i) {
        area += out.pi[i] * chain.stats[i].aoii_area;
        duration += out.pi[i] * chain.stats[i].duration;
        samples += out.pi[i] * chain.stats[i].samples;
    }
    out.aoii = area / duration;
    out.rate = samples / duration;
    return out;
}

namespace {

template <typename StatsFn>
SpChain assemble(const GeneratorMatrix &q, StatsFn &&cycle_stats) {
    const int n = q.size();
    SpChain chain;
    chain.p = Mat::Zero(n, n);
    chain.stats.resize(n);
    for (int i = 0; i < n; ++i) {
        try {
            chain.stats[i] = cycle_stats(i);
        } catch (const SingularTransientBlock &e) {
            std::ostringstream os;
            os << "cycle " << i << ": " << e.what();
            throw SingularTransientBlock(os.str());
        }
        chain.p.row(i) = chain.stats[i].sp_row;
    }
    return chain;
}

} // namespace

SpChain build_sp_chain(const GeneratorMatrix &q, const Policy &policy,
                       const ChannelModel &channel) {
    return std::visit(
        [&](const auto &pol) {
            using P = std::decay_t<decltype(pol)>;
            return assemble(q, [&](int i) {
                if constexpr (std::is_same_v<P, PushPolicy>)
                    return push_cycle_stats(q, i, pol, channel);
                else
                    return pull_cycle_stats(q, i, pol, channel);
            });
        },
        policy);
}

SystemMetrics analyze(const GeneratorMatrix &q, const PushPolicy &policy,
                      const ChannelModel &channel) {
    return analyze(q, Policy{policy}, channel);
}

SystemMetrics analyze(const GeneratorMatrix &q, const PullPolicy &policy,
                      const ChannelModel &channel) {
    return analyze(q, Policy{policy}, channel);
}

SystemMetrics analyze(const GeneratorMatrix &q, const Policy &policy,
                      const ChannelModel &channel) {
    return system_metrics(build_sp_chain(q, policy, channel));
}

} // namespace aoii
