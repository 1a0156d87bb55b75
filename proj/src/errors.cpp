#include "aoii/errors.hpp"

#include <sstream>

namespace aoii {

const char *to_string(ViolationCode code) {
    switch (code) {
    case ViolationCode::NonSquare:
        return "NonSquare";
    case ViolationCode::NegativeOffDiagonal:
        return "NegativeOffDiagonal";
    case ViolationCode::RowSumNonZero:
        return "RowSumNonZero";
    case ViolationCode::AbsorbingSourceState:
        return "AbsorbingSourceState";
    case ViolationCode::InvalidParameter:
        return "InvalidParameter";
    }
    return "Unknown";
}

namespace {

std::string format_violations(const std::vector<Violation> &violations) {
    std::ostringstream os;
    os << "invalid input:";
    for (const auto &v : violations) {
        os << " [" << to_string(v.code);
        if (v.row >= 0)
            os << " row " << v.row;
        if (v.col >= 0)
            os << " col " << v.col;
        if (!v.detail.empty())
            os << ": " << v.detail;
        os << "]";
    }
    return os.str();
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(format_violations(violations)), violations_(std::move(violations)) {}

bool ValidationError::has(ViolationCode code) const {
    for (const auto &v : violations_)
        if (v.code == code)
            return true;
    return false;
}

} // namespace aoii
