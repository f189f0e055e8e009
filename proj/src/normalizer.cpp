#include "akgp/normalizer.hpp"

#include <cmath>

namespace akgp {

Normalizer Normalizer::fit(const Bounds& workspace, const Vector& targets) {
    if (workspace.lower.size() != workspace.upper.size()) throw ShapeError("Normalizer::fit: bad bounds");
    if (targets.size() == 0) throw DomainError("Normalizer::fit: no targets");
    Normalizer n;
    n.input_center = workspace.center();
    n.input_half_range = 0.5 * (workspace.upper - workspace.lower);
    // A degenerate axis is left unscaled.
    n.input_half_range = n.input_half_range.unaryExpr([](double h) { return h > 0.0 ? h : 1.0; });
    n.target_mean = targets.mean();
    const double var = (targets.array() - n.target_mean).square().mean();
    n.target_std = var > 0.0 ? std::sqrt(var) : 1.0;
    return n;
}

void Normalizer::validate() const {
    if (input_center.size() != input_half_range.size() || (input_half_range.array() <= 0.0).any() ||
        !(target_std > 0.0)) {
        throw DomainError("Normalizer: scales must be positive");
    }
}

Matrix Normalizer::normalize_inputs(const Matrix& X) const {
    require_cols(X, input_center.size(), "normalize_inputs");
    return ((X.rowwise() - input_center.transpose()).array().rowwise() / input_half_range.transpose().array())
        .matrix();
}

Matrix Normalizer::denormalize_inputs(const Matrix& X) const {
    require_cols(X, input_center.size(), "denormalize_inputs");
    return ((X.array().rowwise() * input_half_range.transpose().array()).matrix().rowwise() +
            input_center.transpose());
}

Vector Normalizer::standardize_targets(const Vector& y) const {
    return ((y.array() - target_mean) / target_std).matrix();
}

Vector Normalizer::destandardize_targets(const Vector& y) const {
    return (y.array() * target_std + target_mean).matrix();
}

Vector Normalizer::destandardize_variance(const Vector& v) const { return v * (target_std * target_std); }

}  // namespace akgp
