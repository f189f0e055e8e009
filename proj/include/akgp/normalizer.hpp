#ifndef AKGP_NORMALIZER_HPP
#define AKGP_NORMALIZER_HPP

#include "akgp/common.hpp"

namespace akgp {

/// Maps workspace inputs onto [-1, 1] per dimension and standardizes targets.
struct Normalizer {
    Vector input_center;
    Vector input_half_range;
    double target_mean = 0.0;
    double target_std = 1.0;

    /// Input statistics from the workspace box, target statistics (population
    /// std) from `targets`. A constant target set falls back to std 1.
    static Normalizer fit(const Bounds& workspace, const Vector& targets);

    [[nodiscard]] Matrix normalize_inputs(const Matrix& X) const;
    [[nodiscard]] Matrix denormalize_inputs(const Matrix& X) const;
    [[nodiscard]] Vector standardize_targets(const Vector& y) const;
    [[nodiscard]] Vector destandardize_targets(const Vector& y) const;
    [[nodiscard]] Vector destandardize_variance(const Vector& v) const;

    void validate() const;
};

}  // namespace akgp

#endif  // AKGP_NORMALIZER_HPP
