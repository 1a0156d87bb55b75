#pragma once

#include <string>
#include <vector>

#include "aoii/linalg.hpp"

namespace aoii {

// Absorbing CTMC restricted to its transient block: generator
//   [ A  B ]
//   [ 0  0 ]
// with K1 transient states, K2 absorbing states, and initial row vector
// beta over the transient states. The time to absorption is phase-type
// distributed with representation (beta, A).
struct AbsorbingChain {
    Mat a;       // K1 x K1 transient rates, negative diagonal
    Mat b;       // K1 x K2 absorption rates
    RowVec beta; // 1 x K1 initial probabilities
    std::vector<std::string> transient_labels; // optional, for diagnostics
    std::vector<std::string> absorbing_labels;

    int transient_count() const { return static_cast<int>(a.rows()); }
    int absorbing_count() const { return static_cast<int>(b.cols()); }
};

// Checks structural invariants (shapes, signs, zero row sums of [A|B],
// beta a probability row) and returns the chain. Nonsingularity of A is
// not checked here; it surfaces as SingularTransientBlock at solve time.
AbsorbingChain make_absorbing_chain(Mat a, Mat b, RowVec beta,
                                    std::vector<std::string> transient_labels = {},
                                    std::vector<std::string> absorbing_labels = {});

// Jump chain of the absorbing CTMC at its transition epochs:
//   [ D  E ]
//   [ 0  I ]
// with zero diagonal in D and row-stochastic [D|E].
struct EmbeddedDtmc {
    Mat d; // K1 x K1 transient transition probabilities
    Mat e; // K1 x K2 absorption probabilities
};

// E[T] = -beta A^{-1} 1.
double mean_absorption_time(const AbsorbingChain &chain);

// E[T^2]/2 = beta A^{-2} 1.
double half_second_moment_absorption_time(const AbsorbingChain &chain);

// Row of absorption probabilities -beta A^{-1} B; sums to one.
RowVec absorption_probabilities(const AbsorbingChain &chain);

// d_ij = -a_ij / a_ii off the diagonal (normalization by the departing
// row's exit rate), e_ij = -b_ij / a_ii.
EmbeddedDtmc embed_dtmc(const AbsorbingChain &chain);

// F = (I - D)^{-1}; entry (i,j) is the expected number of visits to
// transient state j starting from i.
Mat fundamental_matrix(const EmbeddedDtmc &embedded);

// beta (I - D)^{-1} f for a 0/1 indicator column f over transient states.
double expected_visits(const AbsorbingChain &chain, const Vec &indicator);

} // namespace aoii
