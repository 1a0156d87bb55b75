#include "aoii/generator.hpp"

#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii {

namespace {
constexpr double kRowSumTol = 1e-12;
}

GeneratorMatrix validate_generator(const Mat &raw) {
    std::vector<Violation> violations;
    const auto rows = raw.rows();
    const auto cols = raw.cols();

    if (rows != cols || rows < 2) {
        // N >= 2 is folded into NonSquare: a 0x0 or 1x1 matrix cannot
        // describe a source with distinct estimate mismatches.
        std::ostringstream os;
        os << "expected a square matrix with at least 2 states, got " << rows
           << "x" << cols;
        violations.push_back({ViolationCode::NonSquare, -1, -1, os.str()});
        throw ValidationError(std::move(violations));
    }

    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (i != j && raw(i, j) < 0) {
                std::ostringstream os;
                os << "q(" << i << "," << j << ") = " << raw(i, j);
                violations.push_back(
                    {ViolationCode::NegativeOffDiagonal, i, j, os.str()});
            }
        }
        const double row_sum = raw.row(i).sum();
        if (!(std::abs(row_sum) <= kRowSumTol)) {
            std::ostringstream os;
            os << "row " << i << " sums to " << row_sum;
            violations.push_back({ViolationCode::RowSumNonZero, i, -1, os.str()});
        }
        if (!(-raw(i, i) > 0) || !std::isfinite(raw(i, i))) {
            std::ostringstream os;
            os << "holding rate sigma_" << i << " = " << -raw(i, i)
               << " is not strictly positive";
            violations.push_back(
                {ViolationCode::AbsorbingSourceState, i, -1, os.str()});
        }
    }

    if (!violations.empty())
        throw ValidationError(std::move(violations));
    return GeneratorMatrix(raw);
}

Mat GeneratorMatrix::jump_probabilities() const {
    const int n = size();
    Mat p = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                p(i, j) = q_(i, j) / sigma(i);
    return p;
}

Mat GeneratorMatrix::submatrix_excluding(int state) const {
    const int n = size();
    Mat m(n - 1, n - 1);
    for (int i = 0, r = 0; i < n; ++i) {
        if (i == state)
            continue;
        for (int j = 0, c = 0; j < n; ++j) {
            if (j == state)
                continue;
            m(r, c) = q_(i, j);
            ++c;
        }
        ++r;
    }
    return m;
}

Vec GeneratorMatrix::rates_into(int state) const {
    const int n = size();
    Vec v(n - 1);
    for (int j = 0, r = 0; j < n; ++j) {
        if (j == state)
            continue;
        v[r++] = q_(j, state);
    }
    return v;
}

RowVec GeneratorMatrix::rates_from(int state) const {
    const int n = size();
    RowVec v(n - 1);
    for (int j = 0, c = 0; j < n; ++j) {
        if (j == state)
            continue;
        v[c++] = q_(state, j);
    }
    return v;
}

} // namespace aoii
