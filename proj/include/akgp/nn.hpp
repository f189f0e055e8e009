#ifndef AKGP_NN_HPP
#define AKGP_NN_HPP

#include <array>
#include <random>

#include "akgp/common.hpp"

namespace akgp::nn {

/// Two-hidden-layer perceptron: in -> H -> H -> out, tanh on the hidden
/// layers and identity on the output. Weight matrices are fan_in x fan_out.
struct MlpParams {
    std::array<Matrix, 3> weights;
    std::array<Vector, 3> biases;

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
    static MlpParams init(int in_dim, int hidden_dim, int out_dim, std::mt19937_64& rng);
    static MlpParams zeros(int in_dim, int hidden_dim, int out_dim);

    [[nodiscard]] int in_dim() const { return static_cast<int>(weights[0].rows()); }
    [[nodiscard]] int hidden_dim() const { return static_cast<int>(weights[0].cols()); }
    [[nodiscard]] int out_dim() const { return static_cast<int>(weights[2].cols()); }

    /// Total scalar count. Flat layout is W1, b1, W2, b2, W3, b3 with each
    /// matrix in column-major order.
    [[nodiscard]] Eigen::Index num_params() const;
    [[nodiscard]] Vector flatten() const;
    void assign(const Eigen::Ref<const Vector>& flat);

    [[nodiscard]] bool all_finite() const;
    void check_shapes() const;
};

/// Gradients share the parameter layout exactly.
using MlpGradients = MlpParams;

/// Raw (pre-softmax) outputs, one row per input row.
Matrix mlp_forward(const MlpParams& params, const Matrix& X);

/// Gradient of sum(upstream .* mlp_forward(params, X)) w.r.t. every parameter.
MlpGradients mlp_backward(const MlpParams& params, const Matrix& X, const Matrix& upstream);

/// Row-wise softmax, stabilized by subtracting the row max.
Matrix softmax_rows(const Matrix& raw);

/// Pullback through softmax_rows, given its output `probs`.
Matrix softmax_rows_backward(const Matrix& probs, const Matrix& upstream);

/// Scale each row to unit Euclidean norm. Throws DomainError on a zero row.
Matrix l2_normalize_rows(const Matrix& W);

/// Pullback through l2_normalize_rows, given its input `W`.
Matrix l2_normalize_rows_backward(const Matrix& W, const Matrix& upstream);

}  // namespace akgp::nn

#endif  // AKGP_NN_HPP
