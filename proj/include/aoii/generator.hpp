#pragma once

#include "aoii/linalg.hpp"

namespace aoii {

// Generator (rate) matrix of the observed finite-state CTMC source.
// Off-diagonals are nonnegative, every row sums to zero, and every state
// has a strictly positive holding rate sigma_i = -q_ii. Instances are
// immutable and only produced by validate_generator().
class GeneratorMatrix {
  public:
    int size() const { return static_cast<int>(q_.rows()); }
    const Mat &q() const { return q_; }

    double rate(int from, int to) const { return q_(from, to); }
    double sigma(int state) const { return -q_(state, state); }
    Vec holding_rates() const { return -q_.diagonal(); }

    // Jump-chain probabilities p_ij = q_ij / sigma_i, zero diagonal.
    Mat jump_probabilities() const;

    // Q with row and column `state` removed, (N-1)x(N-1).
    Mat submatrix_excluding(int state) const;
    // Column `state` of Q without the diagonal entry: rates into `state`.
    Vec rates_into(int state) const;
    // Row `state` of Q without the diagonal entry: rates out of `state`.
    RowVec rates_from(int state) const;

  private:
    explicit GeneratorMatrix(Mat q) : q_(std::move(q)) {}
    friend GeneratorMatrix validate_generator(const Mat &raw);

    Mat q_;
};

// Validates a raw rate matrix. Throws ValidationError carrying every
// violated invariant (NonSquare, NegativeOffDiagonal, RowSumNonZero,
// AbsorbingSourceState). Row sums are checked against an absolute 1e-12
// tolerance.
GeneratorMatrix validate_generator(const Mat &raw);

} // namespace aoii
