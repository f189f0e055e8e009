#include "akgp/gpr.hpp"

#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

namespace akgp::gpr {

namespace {

constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-4;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr int kMaxHalvings = 40;

}  // namespace

GPRModel::GPRModel(std::unique_ptr<kernels::Kernel> kernel, double noise_scale)
    : kernel_(std::move(kernel)), X_(0, kernel_ ? kernel_->input_dim() : 0), y_(0) {
    if (!kernel_) throw std::invalid_argument("GPRModel: null kernel");
    if (!(noise_scale > 0.0)) throw DomainError("GPRModel: noise scale must be positive");
    log_noise_ = std::log(noise_scale);
}

GPRModel::GPRModel(const GPRModel& other)
    : kernel_(other.kernel_->clone()),
      log_noise_(other.log_noise_),
      X_(other.X_),
      y_(other.y_),
      chol_(other.chol_),
      weights_(other.weights_),
      jitter_(other.jitter_),
      adam_m_(other.adam_m_),
      adam_v_(other.adam_v_),
      adam_step_(other.adam_step_) {}

GPRModel& GPRModel::operator=(const GPRModel& other) {
    if (this != &other) {
        GPRModel copy(other);
        *this = std::move(copy);
    }
    return *this;
}

void GPRModel::set_noise_scale(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("GPRModel: noise scale must be positive");
    log_noise_ = std::log(sigma);
    refresh();
}

void GPRModel::add_data(const Matrix& X_new, const Vector& y_new) {
    if (X_new.rows() != y_new.size()) throw ShapeError("add_data: row count of X differs from length of y");
    if (X_new.rows() == 0) return;
    require_cols(X_new, input_dim(), "add_data");
    Matrix X(X_.rows() + X_new.rows(), X_.cols());
    X << X_, X_new;
    Vector y(y_.size() + y_new.size());
    y << y_, y_new;
    X_ = std::move(X);
    y_ = std::move(y);
    refresh();
}

GPRModel::Factorization GPRModel::factorize(const Matrix& gram) const {
    const double noise_var = std::exp(2.0 * log_noise_);
    const double scale = gram.diagonal().mean();
    Factorization f;
    for (double rel = kJitterStart; rel <= kJitterMax * (1.0 + 1e-9); rel *= 10.0) {
        f.jitter = rel * scale;
        Matrix K = gram;
        K.diagonal().array() += noise_var + f.jitter;
        Eigen::LLT<Matrix> llt(K);
        if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().allFinite()) {
            f.L = llt.matrixL();
            if (rel > kJitterStart) spdlog::debug("cholesky needed jitter {:.3g}", f.jitter);
            return f;
        }
    }
    throw NumericalError("GPR: Cholesky factorization failed after jitter escalation to " +
                         format_double(kJitterMax * scale) + " (N=" + std::to_string(gram.rows()) + ")");
}

void GPRModel::refresh() {
    if (y_.size() == 0) {
        chol_.resize(0, 0);
        weights_.resize(0);
        return;
    }
    Factorization f = factorize(kernel_->gram(X_));
    chol_ = std::move(f.L);
    jitter_ = f.jitter;
    weights_ = chol_.triangularView<Eigen::Lower>().solve(y_);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(weights_);
}

void GPRModel::require_data(const char* where) const {
    if (y_.size() == 0) throw DomainError(std::string(where) + ": model has no training data");
}

Prediction GPRModel::predict(const Matrix& X_query) const {
    require_data("predict");
    require_cols(X_query, input_dim(), "predict");
    const Matrix cross = kernel_->gram(X_, X_query);  // N x Q
    Prediction p;
    p.mean = cross.transpose() * weights_;
    const Matrix v = chol_.triangularView<Eigen::Lower>().solve(cross);
    p.variance = kernel_->diag(X_query) - v.colwise().squaredNorm().transpose();
    const double worst = p.variance.minCoeff();
    if (worst < 0.0) {
        spdlog::debug("predict: clamped negative variance {:.3g} to zero", worst);
        p.variance = p.variance.cwiseMax(0.0);
    }
    return p;
}

double GPRModel::log_marginal_likelihood() const {
    require_data("log_marginal_likelihood");
    const double n = static_cast<double>(y_.size());
    return -0.5 * y_.dot(weights_) - chol_.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

LmlWithGradient GPRModel::lml_with_gradient() const {
    require_data("lml_with_gradient");
    const kernels::GramWithGrads gg = kernel_->gram_with_grads(X_);
    const Factorization f = factorize(gg.gram);
    const Eigen::Index n = y_.size();

    Vector a = f.L.triangularView<Eigen::Lower>().solve(y_);
    f.L.triangularView<Eigen::Lower>().transpose().solveInPlace(a);
    const Matrix L_inv = f.L.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
    const Matrix K_inv = L_inv.transpose() * L_inv;

    LmlWithGradient out;
    out.value = -0.5 * y_.dot(a) - f.L.diagonal().array().log().sum() -
                0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

    const Matrix dL_dK = 0.5 * (a * a.transpose() - K_inv);
    const Vector kernel_grad = gg.contract(dL_dK);
    out.gradient.resize(1 + kernel_grad.size());
    out.gradient(0) = dL_dK.trace() * 2.0 * std::exp(2.0 * log_noise_);
    out.gradient.tail(kernel_grad.size()) = kernel_grad;
    return out;
}

Vector GPRModel::params() const {
    const Vector kp = kernel_->params();
    Vector p(1 + kp.size());
    p(0) = log_noise_;
    p.tail(kp.size()) = kp;
    return p;
}

void GPRModel::set_params(const Vector& flat) {
    if (flat.size() != 1 + kernel_->num_params()) throw ShapeError("GPRModel::set_params: wrong parameter count");
    log_noise_ = flat(0);
    kernel_->set_params(flat.tail(flat.size() - 1));
    refresh();
}

std::vector<kernels::ParamGroup> GPRModel::param_groups() const {
    std::vector<kernels::ParamGroup> groups{kernels::ParamGroup::Hyper};
    const auto kg = kernel_->param_groups();
    groups.insert(groups.end(), kg.begin(), kg.end());
    return groups;
}

OptimizeResult GPRModel::optimize(const OptimizeOptions& options) {
    OptimizeResult result;
    if (options.num_iters <= 0) return result;
    require_data("optimize");

    Vector theta = params();
    const auto groups = param_groups();
    Vector lr(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        lr(i) = groups[static_cast<std::size_t>(i)] == kernels::ParamGroup::Net ? options.lr_net : options.lr_hyper;
    }
    if (adam_m_.size() != theta.size()) {
        adam_m_ = Vector::Zero(theta.size());
        adam_v_ = Vector::Zero(theta.size());
        adam_step_ = 0;
    }

    // Evaluates LML and gradient at `p`, leaving the kernel set to `p`.
    // Returns false if anything is non-finite or the factorization fails.
    auto evaluate = [&](const Vector& p, LmlWithGradient& out, std::string& why) {
        log_noise_ = p(0);
        kernel_->set_params(p.tail(p.size() - 1));
        try {
            out = lml_with_gradient();
        } catch (const NumericalError& e) {
            why = e.what();
            return false;
        }
        if (!std::isfinite(out.value) || !out.gradient.allFinite()) {
            why = "non-finite marginal likelihood or gradient";
            return false;
        }
        return true;
    };
    auto abort_at = [&](int iter, const std::string& why) {
        result.aborted = true;
        result.diagnostic = "optimize aborted at iteration " + std::to_string(iter) + ": " + why;
        spdlog::warn("{}", result.diagnostic);
    };

    LmlWithGradient current;
    std::string why;
    if (!evaluate(theta, current, why)) {
        abort_at(0, why);
        set_params(theta);
        return result;
    }

    for (int iter = 0; iter < options.num_iters; ++iter) {
        result.lml_trace.push_back(current.value);

        // Ascent: Adam on the negated objective.
        const Vector g = -current.gradient;
        ++adam_step_;
        adam_m_ = kAdamBeta1 * adam_m_ + (1.0 - kAdamBeta1) * g;
        adam_v_ = kAdamBeta2 * adam_v_ + (1.0 - kAdamBeta2) * g.cwiseAbs2();
        const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam_step_));
        const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam_step_));
        const Vector direction =
            ((adam_m_ / bc1).array() / ((adam_v_ / bc2).array().sqrt() + kAdamEps)).matrix();

        double scale = 1.0;
        LmlWithGradient next;
        Vector candidate = theta - scale * lr.cwiseProduct(direction);
        bool ok = evaluate(candidate, next, why);
        if (options.halve_lr_on_decrease) {
            int halvings = 0;
            while ((!ok || next.value < current.value) && halvings < kMaxHalvings) {
                scale *= 0.5;
                ++halvings;
                candidate = theta - scale * lr.cwiseProduct(direction);
                ok = evaluate(candidate, next, why);
            }
            if (ok && next.value < current.value) {
                // No improving step exists along this direction; stay put.
                candidate = theta;
                ok = evaluate(candidate, next, why);
            }
        }
        if (!ok) {
            abort_at(iter, why);
            set_params(theta);
            return result;
        }
        theta = candidate;
        current = std::move(next);
        if (options.on_iteration) {
            refresh();
            options.on_iteration(iter, *this);
        }
    }
    set_params(theta);
    return result;
}

}  // namespace akgp::gpr
