#ifndef AKGP_COMMON_HPP
#define AKGP_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace akgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when matrix/vector dimensions disagree with what an operation expects.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for inputs outside an operation's mathematical domain
/// (non-positive variance, zero-norm rows, zero target variance, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a factorization fails even after jitter escalation, or a
/// computation produces non-finite values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed files and configs.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_cols(const Matrix& m, Eigen::Index cols, const char* where) {
    if (m.cols() != cols) {
        throw ShapeError(std::string(where) + ": expected " + std::to_string(cols) + " columns, got " +
                         std::to_string(m.cols()));
    }
}

/// Axis-aligned box in workspace units, one interval per input dimension.
struct Bounds {
    Vector lower;
    Vector upper;

    [[nodiscard]] Eigen::Index dim() const { return lower.size(); }
    [[nodiscard]] Vector center() const { return 0.5 * (lower + upper); }
    [[nodiscard]] Vector clamp(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
    [[nodiscard]] bool contains(const Vector& x, double tol = 0.0) const {
        return ((x.array() >= lower.array() - tol) && (x.array() <= upper.array() + tol)).all();
    }
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Parse a full token as a double; throws ParseError on trailing garbage.
double parse_double(std::string_view token);

}  // namespace akgp

#endif  // AKGP_COMMON_HPP
