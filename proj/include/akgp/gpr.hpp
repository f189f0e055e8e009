#ifndef AKGP_GPR_HPP
#define AKGP_GPR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "akgp/common.hpp"
#include "akgp/kernels.hpp"

namespace akgp::gpr {

/// Latent-function posterior at query points (standardized units).
struct Prediction {
    Vector mean;
    Vector variance;
};

struct OptimizeOptions {
    int num_iters = 0;
    double lr_hyper = 1e-2;
    double lr_net = 1e-3;
    /// When set, a step that lowers the marginal likelihood is retried with a
    /// halved learning rate, so the trace never decreases.
    bool halve_lr_on_decrease = false;
    /// Called after every accepted step with (iteration, model).
    std::function<void(int, const class GPRModel&)> on_iteration;
};

struct OptimizeResult {
    std::vector<double> lml_trace;  // marginal likelihood before each step
    bool aborted = false;
    std::string diagnostic;
};

struct LmlWithGradient {
    double value = 0.0;
    Vector gradient;  // ordered as GPRModel::params()
};

/// Exact GP regression with Gaussian noise. The Cholesky factor of
/// K + (sigma^2 + jitter) I is refreshed eagerly whenever data or parameters
/// change, so const members never mutate.
class GPRModel {
public:
    explicit GPRModel(std::unique_ptr<kernels::Kernel> kernel, double noise_scale = 0.1);
    GPRModel(const GPRModel& other);
    GPRModel& operator=(const GPRModel& other);
    GPRModel(GPRModel&&) noexcept = default;
    GPRModel& operator=(GPRModel&&) noexcept = default;

    void add_data(const Matrix& X_new, const Vector& y_new);

    [[nodiscard]] Prediction predict(const Matrix& X_query) const;
    [[nodiscard]] double log_marginal_likelihood() const;
    [[nodiscard]] LmlWithGradient lml_with_gradient() const;
    [[nodiscard]] Vector lml_gradients() const { return lml_with_gradient().gradient; }

    /// Adam ascent on the log marginal likelihood. Noise and amplitude-like
    /// parameters use lr_hyper, network weights use lr_net.
    OptimizeResult optimize(const OptimizeOptions& options);

    /// [log sigma, kernel params...].
    [[nodiscard]] Vector params() const;
    void set_params(const Vector& flat);
    [[nodiscard]] std::vector<kernels::ParamGroup> param_groups() const;

    [[nodiscard]] double noise_scale() const { return std::exp(log_noise_); }
    void set_noise_scale(double sigma);

    [[nodiscard]] const kernels::Kernel& kernel() const { return *kernel_; }
    [[nodiscard]] const Matrix& X_train() const { return X_; }
    [[nodiscard]] const Vector& y_train() const { return y_; }
    [[nodiscard]] Eigen::Index num_train() const { return y_.size(); }
    [[nodiscard]] Eigen::Index input_dim() const { return kernel_->input_dim(); }

    /// Jitter added on the last successful factorization.
    [[nodiscard]] double jitter() const { return jitter_; }
    [[nodiscard]] const Matrix& cholesky_factor() const { return chol_; }

private:
    struct Factorization {
        Matrix L;
        double jitter = 0.0;
    };

    /// Cholesky of gram + sigma^2 I with escalating jitter; throws NumericalError.
    [[nodiscard]] Factorization factorize(const Matrix& gram) const;
    void refresh();
    void require_data(const char* where) const;

    std::unique_ptr<kernels::Kernel> kernel_;
    double log_noise_;
    Matrix X_;
    Vector y_;

    Matrix chol_;
    Vector weights_;  // (K + sigma^2 I)^-1 y
    double jitter_ = 0.0;

    // Adam state, kept across optimize() calls.
    Vector adam_m_;
    Vector adam_v_;
    long adam_step_ = 0;
};

}  // namespace akgp::gpr

#endif  // AKGP_GPR_HPP
