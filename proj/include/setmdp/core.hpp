#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace setmdp {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

/// Simplex membership tolerance applied when validating transition rows and policies.
inline constexpr double kSimplexTolerance = 1e-9;

/**
 * Input rejected by validation. `field()` names the offending location using the
 * same indexing as the JSON formats, e.g. `P[3][1]` or `V`.
 */
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The requested combination of parameter-set variant, operator and direction is not supported.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
    return x.allFinite();
}

/// Sup-norm of a difference; the metric used throughout.
template <typename DerivedA, typename DerivedB>
auto sup_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/**
 * Checks that `row` lies in the probability simplex within kSimplexTolerance.
 * Rows whose sum deviates by more than 1e-14 (but within tolerance) are renormalized
 * in place and tiny negative entries are clamped to zero; anything else throws.
 */
template <typename Scalar>
void validate_simplex(Vector<Scalar>& row, const std::string& field) {
    if (row.size() == 0) throw ValidationError(field, "empty distribution");
    if (!row.allFinite()) throw ValidationError(field, "non-finite probability");
    if (row.minCoeff() < Scalar(-kSimplexTolerance))
        throw ValidationError(field, "negative probability " + std::to_string(double(row.minCoeff())));
    Scalar total = row.sum();
    if (std::abs(double(total) - 1.0) > kSimplexTolerance)
        throw ValidationError(field, "row sums to " + std::to_string(double(total)) + ", expected 1");
    if (row.minCoeff() < Scalar(0)) {
        row = row.cwiseMax(Scalar(0));
        total = row.sum();
    }
    if (std::abs(double(total) - 1.0) > 1e-14) row /= total;
}

inline std::string indexed(const std::string& name, Index i) {
    return name + "[" + std::to_string(i) + "]";
}

inline std::string indexed(const std::string& name, Index i, Index j) {
    return name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

} // namespace setmdp
