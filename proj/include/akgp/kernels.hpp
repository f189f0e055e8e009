#ifndef AKGP_KERNELS_HPP
#define AKGP_KERNELS_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "akgp/common.hpp"
#include "akgp/nn.hpp"

namespace akgp::kernels {

/// Which learning rate a parameter trains with.
enum class ParamGroup { Hyper, Net };

/// M evenly spaced, fixed lengthscales over [l_min, l_max].
struct LengthscaleGrid {
    double l_min = 0.01;
    double l_max = 0.5;
    int count = 10;

    void validate() const;
    [[nodiscard]] Vector lengthscales() const;
};

/// Squared Euclidean distances between rows of X1 and X2. Exact zero for identical rows.
Matrix pairwise_sq_dist(const Matrix& X1, const Matrix& X2);

/// One unit-amplitude RBF Gram matrix per grid lengthscale, all derived from
/// the same pairwise distance matrix.
std::vector<Matrix> base_kernel_stack(const LengthscaleGrid& grid, const Matrix& X1, const Matrix& X2);

/// Gram matrix of the training inputs together with a pullback that maps
/// dL/dG to dL/dp for every trainable parameter, in params() order.
struct GramWithGrads {
    Matrix gram;
    std::function<Vector(const Matrix& dL_dG)> contract;
};

class Kernel {
public:
    virtual ~Kernel() = default;

    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual std::unique_ptr<Kernel> clone() const = 0;
    [[nodiscard]] virtual Eigen::Index input_dim() const = 0;

    [[nodiscard]] virtual Matrix gram(const Matrix& X1, const Matrix& X2) const = 0;
    [[nodiscard]] Matrix gram(const Matrix& X) const { return gram(X, X); }
    /// k(x, x) per row. Every kernel here is normalized so this is the amplitude.
    [[nodiscard]] virtual Vector diag(const Matrix& X) const;

    [[nodiscard]] virtual GramWithGrads gram_with_grads(const Matrix& X) const = 0;

    /// Flat trainable parameters; positive scalars are stored as logs.
    /// Index 0 is always log amplitude.
    [[nodiscard]] virtual Vector params() const = 0;
    virtual void set_params(const Vector& flat) = 0;
    [[nodiscard]] virtual std::vector<ParamGroup> param_groups() const = 0;
    [[nodiscard]] Eigen::Index num_params() const { return params().size(); }

    [[nodiscard]] double amplitude() const { return std::exp(log_amplitude_); }
    void set_amplitude(double a);

protected:
    void check_input(const Matrix& X1, const Matrix& X2, const char* where) const;
    double log_amplitude_ = 0.0;
};

/// alpha * exp(-|x - x'|^2 / (2 l^2)).
class RbfKernel final : public Kernel {
public:
    RbfKernel(Eigen::Index input_dim, double amplitude, double lengthscale);

    [[nodiscard]] std::string name() const override { return "rbf"; }
    [[nodiscard]] std::unique_ptr<Kernel> clone() const override { return std::make_unique<RbfKernel>(*this); }
    [[nodiscard]] Eigen::Index input_dim() const override { return dim_; }
    [[nodiscard]] Matrix gram(const Matrix& X1, const Matrix& X2) const override;
    using Kernel::gram;
    [[nodiscard]] GramWithGrads gram_with_grads(const Matrix& X) const override;
    [[nodiscard]] Vector params() const override;
    void set_params(const Vector& flat) override;
    [[nodiscard]] std::vector<ParamGroup> param_groups() const override;

    [[nodiscard]] double lengthscale() const { return std::exp(log_lengthscale_); }

private:
    Eigen::Index dim_;
    double log_lengthscale_;
};

enum class AkVariant { Full, WeightOnly, MaskOnly, TwoNets };

std::string to_string(AkVariant v);

/// Per-input attention vectors: rows of `weights` scale the base kernels,
/// rows of `memberships` gate visibility between inputs. Both are
/// softmax outputs scaled to unit l2 norm.
struct Attention {
    Matrix weights;
    Matrix memberships;  // empty when the variant has no mask
};

/// The attentive kernel:
///   k(x, x') = alpha * <z(x), z(x')> * sum_m w_m(x) w_m(x') k_m(x, x')
/// over a fixed grid of RBF base kernels k_m. By default w and z come from
/// one shared network; the ablation variants drop one of the two factors or
/// give z its own network.
class AttentiveKernel final : public Kernel {
public:
    AttentiveKernel(LengthscaleGrid grid, nn::MlpParams net, double amplitude, AkVariant variant = AkVariant::Full,
                    std::optional<nn::MlpParams> second_net = std::nullopt);

    [[nodiscard]] std::string name() const override;
    [[nodiscard]] std::unique_ptr<Kernel> clone() const override { return std::make_unique<AttentiveKernel>(*this); }
    [[nodiscard]] Eigen::Index input_dim() const override { return net_.in_dim(); }
    [[nodiscard]] Matrix gram(const Matrix& X1, const Matrix& X2) const override;
    using Kernel::gram;
    [[nodiscard]] GramWithGrads gram_with_grads(const Matrix& X) const override;
    [[nodiscard]] Vector params() const override;
    void set_params(const Vector& flat) override;
    [[nodiscard]] std::vector<ParamGroup> param_groups() const override;

    [[nodiscard]] Attention attention(const Matrix& X) const;
    [[nodiscard]] const LengthscaleGrid& grid() const { return grid_; }
    [[nodiscard]] AkVariant variant() const { return variant_; }
    [[nodiscard]] const nn::MlpParams& net() const { return net_; }
    [[nodiscard]] const std::optional<nn::MlpParams>& second_net() const { return second_net_; }

private:
    LengthscaleGrid grid_;
    nn::MlpParams net_;
    AkVariant variant_;
    std::optional<nn::MlpParams> second_net_;
};

/// Gibbs kernel with an isotropic lengthscale function
///   l(x) = l_min + (l_max - l_min) * sigmoid(net(x)),
///   k(x, x') = alpha * (2 l l' / (l^2 + l'^2))^(D/2) * exp(-|x - x'|^2 / (l^2 + l'^2)).
class GibbsKernel final : public Kernel {
public:
    GibbsKernel(nn::MlpParams net, double amplitude, double l_min, double l_max);

    [[nodiscard]] std::string name() const override { return "gibbs"; }
    [[nodiscard]] std::unique_ptr<Kernel> clone() const override { return std::make_unique<GibbsKernel>(*this); }
    [[nodiscard]] Eigen::Index input_dim() const override { return net_.in_dim(); }
    [[nodiscard]] Matrix gram(const Matrix& X1, const Matrix& X2) const override;
    using Kernel::gram;
    [[nodiscard]] GramWithGrads gram_with_grads(const Matrix& X) const override;
    [[nodiscard]] Vector params() const override;
    void set_params(const Vector& flat) override;
    [[nodiscard]] std::vector<ParamGroup> param_groups() const override;

    [[nodiscard]] Vector lengthscales(const Matrix& X) const;
    [[nodiscard]] const nn::MlpParams& net() const { return net_; }
    [[nodiscard]] double l_min() const { return l_min_; }
    [[nodiscard]] double l_max() const { return l_max_; }

private:
    nn::MlpParams net_;
    double l_min_;
    double l_max_;
};

/// RBF kernel applied to learned features: k(x, x') = rbf(net(x), net(x')).
class DeepKernel final : public Kernel {
public:
    DeepKernel(nn::MlpParams net, double amplitude, double lengthscale);

    [[nodiscard]] std::string name() const override { return "dkl"; }
    [[nodiscard]] std::unique_ptr<Kernel> clone() const override { return std::make_unique<DeepKernel>(*this); }
    [[nodiscard]] Eigen::Index input_dim() const override { return net_.in_dim(); }
    [[nodiscard]] Matrix gram(const Matrix& X1, const Matrix& X2) const override;
    using Kernel::gram;
    [[nodiscard]] GramWithGrads gram_with_grads(const Matrix& X) const override;
    [[nodiscard]] Vector params() const override;
    void set_params(const Vector& flat) override;
    [[nodiscard]] std::vector<ParamGroup> param_groups() const override;

    [[nodiscard]] double lengthscale() const { return std::exp(log_lengthscale_); }
    [[nodiscard]] const nn::MlpParams& net() const { return net_; }

private:
    nn::MlpParams net_;
    double log_lengthscale_;
};

/// Construction knobs shared by every kernel name.
struct KernelOptions {
    Eigen::Index input_dim = 2;
    LengthscaleGrid grid{};
    int hidden_dim = 10;
    int dkl_feature_dim = 0;  // 0 means input_dim
    double amplitude = 1.0;
    double rbf_lengthscale = 0.5;
    double dkl_lengthscale = 0.5;
};

/// "rbf" | "ak" | "ak-weight" | "ak-mask" | "ak-nnx2" | "gibbs" | "dkl".
std::unique_ptr<Kernel> make_kernel(const std::string& name, const KernelOptions& options, std::mt19937_64& rng);

}  // namespace akgp::kernels

#endif  // AKGP_KERNELS_HPP
