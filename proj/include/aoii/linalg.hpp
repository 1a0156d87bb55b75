#pragma once

#include <Eigen/Dense>

namespace aoii {

// Dense row-major matrices throughout; the state spaces handled here are
// small (tens of states), so no sparse machinery.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;

// Factorizations whose reciprocal condition estimate falls below this are
// treated as singular.
inline constexpr double kSingularRcond = 1e-12;

} // namespace aoii
