#include "aoii/absorbing.hpp"

#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii {

namespace {

constexpr double kSumTol = 1e-12;

// LU with a reciprocal-condition guard; all A^{-1}-type quantities go
// through solves on this factorization, never an explicit inverse.
class GuardedLu {
  public:
    GuardedLu(const Mat &m, const char *what) : lu_(m) {
        const double rc = lu_.rcond();
        if (!(rc > kSingularRcond)) {
            std::ostringstream os;
            os << what << " is numerically singular (rcond estimate " << rc
               << ")";
            throw SingularTransientBlock(os.str());
        }
    }

    template <typename Rhs> auto solve(const Rhs &rhs) const {
        return lu_.solve(rhs).eval();
    }

  private:
    Eigen::PartialPivLU<Mat> lu_;
};

} // namespace

AbsorbingChain make_absorbing_chain(Mat a, Mat b, RowVec beta,
                                    std::vector<std::string> transient_labels,
                                    std::vector<std::string> absorbing_labels) {
    std::vector<Violation> violations;
    const auto k1 = a.rows();

    if (a.cols() != k1 || b.rows() != k1 || beta.cols() != k1 || k1 < 1) {
        std::ostringstream os;
        os << "inconsistent shapes: A " << a.rows() << "x" << a.cols() << ", B "
           << b.rows() << "x" << b.cols() << ", beta 1x" << beta.cols();
        violations.push_back({ViolationCode::NonSquare, -1, -1, os.str()});
        throw ValidationError(std::move(violations));
    }

    for (int i = 0; i < k1; ++i) {
        if (!(a(i, i) < 0)) {
            std::ostringstream os;
            os << "A(" << i << "," << i << ") = " << a(i, i)
               << " is not negative";
            violations.push_back(
                {ViolationCode::AbsorbingSourceState, i, i, os.str()});
        }
        for (int j = 0; j < a.cols(); ++j)
            if (i != j && a(i, j) < 0)
                violations.push_back({ViolationCode::NegativeOffDiagonal, i, j,
                                      "negative off-diagonal in A"});
        for (int j = 0; j < b.cols(); ++j)
            if (b(i, j) < 0)
                violations.push_back({ViolationCode::NegativeOffDiagonal, i, j,
                                      "negative entry in B"});
        const double row_sum = a.row(i).sum() + b.row(i).sum();
        // Cancellation noise grows with the rates involved.
        const double scale = std::max(a.row(i).cwiseAbs().maxCoeff(),
                                      b.row(i).cwiseAbs().maxCoeff());
        if (!(std::abs(row_sum) <= kSumTol * std::max(1.0, scale))) {
            std::ostringstream os;
            os << "row " << i << " of [A|B] sums to " << row_sum;
            violations.push_back({ViolationCode::RowSumNonZero, i, -1, os.str()});
        }
    }

    double beta_sum = 0;
    for (int i = 0; i < k1; ++i) {
        if (beta[i] < 0)
            violations.push_back({ViolationCode::NegativeOffDiagonal, -1, i,
                                  "negative entry in beta"});
        beta_sum += beta[i];
    }
    if (!(std::abs(beta_sum - 1.0) <= kSumTol)) {
        std::ostringstream os;
        os << "beta sums to " << beta_sum;
        violations.push_back({ViolationCode::RowSumNonZero, -1, -1, os.str()});
    }

    if (!violations.empty())
        throw ValidationError(std::move(violations));
    return AbsorbingChain{std::move(a), std::move(b), std::move(beta),
                          std::move(transient_labels),
                          std::move(absorbing_labels)};
}

double mean_absorption_time(const AbsorbingChain &chain) {
    GuardedLu lu(chain.a, "transient block A");
    const Vec x = lu.solve(Vec::Ones(chain.transient_count()));
    return -chain.beta.dot(x);
}

double half_second_moment_absorption_time(const AbsorbingChain &chain) {
    GuardedLu lu(chain.a, "transient block A");
    const Vec x = lu.solve(Vec::Ones(chain.transient_count()));
    const Vec y = lu.solve(x);
    return chain.beta.dot(y);
}

RowVec absorption_probabilities(const AbsorbingChain &chain) {
    GuardedLu lu(chain.a, "transient block A");
    const Mat x = lu.solve(chain.b); // A^{-1} B
    return -(chain.beta * x);
}

EmbeddedDtmc embed_dtmc(const AbsorbingChain &chain) {
    const int k1 = chain.transient_count();
    EmbeddedDtmc out;
    out.d = Mat::Zero(k1, k1);
    out.e = Mat::Zero(k1, chain.absorbing_count());
    for (int i = 0; i < k1; ++i) {
        const double exit_rate = -chain.a(i, i);
        for (int j = 0; j < k1; ++j)
            if (i != j)
                out.d(i, j) = chain.a(i, j) / exit_rate;
        for (int j = 0; j < chain.absorbing_count(); ++j)
            out.e(i, j) = chain.b(i, j) / exit_rate;
    }
    return out;
}

Mat fundamental_matrix(const EmbeddedDtmc &embedded) {
    const auto k1 = embedded.d.rows();
    const Mat m = Mat::Identity(k1, k1) - embedded.d;
    GuardedLu lu(m, "I - D");
    return lu.solve(Mat::Identity(k1, k1));
}

double expected_visits(const AbsorbingChain &chain, const Vec &indicator) {
    const EmbeddedDtmc embedded = embed_dtmc(chain);
    const auto k1 = embedded.d.rows();
    const Mat m = Mat::Identity(k1, k1) - embedded.d;
    GuardedLu lu(m, "I - D");
    const Vec y = lu.solve(indicator);
    return chain.beta.dot(y);
}

} // namespace aoii
