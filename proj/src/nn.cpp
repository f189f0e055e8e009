#include "akgp/nn.hpp"

#include <cmath>

namespace akgp::nn {

namespace {

struct Activations {
    Matrix hidden1;
    Matrix hidden2;
    Matrix out;
};

Activations forward_all(const MlpParams& p, const Matrix& X) {
    require_cols(X, p.in_dim(), "mlp_forward");
    Activations a;
    a.hidden1 = ((X * p.weights[0]).rowwise() + p.biases[0].transpose()).array().tanh().matrix();
    a.hidden2 = ((a.hidden1 * p.weights[1]).rowwise() + p.biases[1].transpose()).array().tanh().matrix();
    a.out = (a.hidden2 * p.weights[2]).rowwise() + p.biases[2].transpose();
    return a;
}

}  // namespace

MlpParams MlpParams::zeros(int in_dim, int hidden_dim, int out_dim) {
    if (in_dim <= 0 || hidden_dim <= 0 || out_dim <= 0) {
        throw ShapeError("MlpParams: dimensions must be positive");
    }
    MlpParams p;
    p.weights[0] = Matrix::Zero(in_dim, hidden_dim);
    p.weights[1] = Matrix::Zero(hidden_dim, hidden_dim);
    p.weights[2] = Matrix::Zero(hidden_dim, out_dim);
    p.biases[0] = Vector::Zero(hidden_dim);
    p.biases[1] = Vector::Zero(hidden_dim);
    p.biases[2] = Vector::Zero(out_dim);
    return p;
}

MlpParams MlpParams::init(int in_dim, int hidden_dim, int out_dim, std::mt19937_64& rng) {
    MlpParams p = zeros(in_dim, hidden_dim, out_dim);
    for (auto& w : p.weights) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(w.rows()));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
    return p;
}

Eigen::Index MlpParams::num_params() const {
    Eigen::Index n = 0;
    for (int l = 0; l < 3; ++l) n += weights[l].size() + biases[l].size();
    return n;
}

Vector MlpParams::flatten() const {
    Vector flat(num_params());
    Eigen::Index off = 0;
    for (int l = 0; l < 3; ++l) {
        flat.segment(off, weights[l].size()) = weights[l].reshaped();
        off += weights[l].size();
        flat.segment(off, biases[l].size()) = biases[l];
        off += biases[l].size();
    }
    return flat;
}

void MlpParams::assign(const Eigen::Ref<const Vector>& flat) {
    if (flat.size() != num_params()) {
        throw ShapeError("MlpParams::assign: expected " + std::to_string(num_params()) + " values, got " +
                         std::to_string(flat.size()));
    }
    Eigen::Index off = 0;
    for (int l = 0; l < 3; ++l) {
        weights[l].reshaped() = flat.segment(off, weights[l].size());
        off += weights[l].size();
        biases[l] = flat.segment(off, biases[l].size());
        off += biases[l].size();
    }
}

bool MlpParams::all_finite() const {
    for (int l = 0; l < 3; ++l) {
        if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
    }
    return true;
}

void MlpParams::check_shapes() const {
    const bool ok = weights[1].rows() == weights[0].cols() && weights[1].cols() == weights[0].cols() &&
                    weights[2].rows() == weights[1].cols() && biases[0].size() == weights[0].cols() &&
                    biases[1].size() == weights[1].cols() && biases[2].size() == weights[2].cols();
    if (!ok) throw ShapeError("MlpParams: inconsistent layer shapes");
}

Matrix mlp_forward(const MlpParams& params, const Matrix& X) { return forward_all(params, X).out; }

MlpGradients mlp_backward(const MlpParams& params, const Matrix& X, const Matrix& upstream) {
    const Activations a = forward_all(params, X);
    if (upstream.rows() != X.rows() || upstream.cols() != params.out_dim()) {
        throw ShapeError("mlp_backward: upstream gradient must be N x out_dim");
    }
    MlpGradients g;
    g.weights[2] = a.hidden2.transpose() * upstream;
    g.biases[2] = upstream.colwise().sum().transpose();

    const Matrix delta2 =
        ((upstream * params.weights[2].transpose()).array() * (1.0 - a.hidden2.array().square())).matrix();
    g.weights[1] = a.hidden1.transpose() * delta2;
    g.biases[1] = delta2.colwise().sum().transpose();

    const Matrix delta1 =
        ((delta2 * params.weights[1].transpose()).array() * (1.0 - a.hidden1.array().square())).matrix();
    g.weights[0] = X.transpose() * delta1;
    g.biases[0] = delta1.colwise().sum().transpose();
    return g;
}

Matrix softmax_rows(const Matrix& raw) {
    if (!raw.allFinite()) throw NumericalError("softmax_rows: non-finite input");
    Matrix out = (raw.colwise() - raw.rowwise().maxCoeff()).array().exp().matrix();
    out.array().colwise() /= out.rowwise().sum().array();
    return out;
}

Matrix softmax_rows_backward(const Matrix& probs, const Matrix& upstream) {
    const Vector inner = (probs.array() * upstream.array()).rowwise().sum();
    return (probs.array() * (upstream.colwise() - inner).array()).matrix();
}

Matrix l2_normalize_rows(const Matrix& W) {
    const Vector norms = W.rowwise().norm();
    if ((norms.array() <= 0.0).any() || !norms.allFinite()) {
        throw DomainError("l2_normalize_rows: zero-norm or non-finite row");
    }
    Matrix out = W;
    out.array().colwise() /= norms.array();
    return out;
}

Matrix l2_normalize_rows_backward(const Matrix& W, const Matrix& upstream) {
    const Vector norms = W.rowwise().norm();
    const Matrix unit = l2_normalize_rows(W);
    const Vector proj = (unit.array() * upstream.array()).rowwise().sum();
    Matrix out = upstream - unit.cwiseProduct(proj.replicate(1, W.cols()));
    out.array().colwise() /= norms.array();
    return out;
}

}  // namespace akgp::nn
