#include "akgp/kernels.hpp"

#include <cmath>

namespace akgp::kernels {

namespace {

/// Softmax followed by l2 normalization, keeping the softmax output for the pullback.
struct Representation {
    Matrix probs;
    Matrix unit;
};

Representation represent(const nn::MlpParams& net, const Matrix& X) {
    Representation r;
    r.probs = nn::softmax_rows(nn::mlp_forward(net, X));
    r.unit = nn::l2_normalize_rows(r.probs);
    return r;
}

Vector represent_backward(const nn::MlpParams& net, const Matrix& X, const Representation& r, const Matrix& d_unit) {
    const Matrix d_probs = nn::l2_normalize_rows_backward(r.probs, d_unit);
    const Matrix d_raw = nn::softmax_rows_backward(r.probs, d_probs);
    return nn::mlp_backward(net, X, d_raw).flatten();
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

void LengthscaleGrid::validate() const {
    if (!(l_min > 0.0) || !(l_max > l_min) || count < 2) {
        throw DomainError("LengthscaleGrid: need 0 < l_min < l_max and at least two lengthscales");
    }
}

Vector LengthscaleGrid::lengthscales() const {
    validate();
    return Vector::LinSpaced(count, l_min, l_max);
}

Matrix pairwise_sq_dist(const Matrix& X1, const Matrix& X2) {
    if (X1.cols() != X2.cols()) throw ShapeError("pairwise_sq_dist: column counts differ");
    Matrix d2 = Matrix::Zero(X1.rows(), X2.rows());
    for (Eigen::Index d = 0; d < X1.cols(); ++d) {
        d2.array() += (X1.col(d).replicate(1, X2.rows()) - X2.col(d).transpose().replicate(X1.rows(), 1))
                          .array()
                          .square();
    }
    return d2;
}

std::vector<Matrix> base_kernel_stack(const LengthscaleGrid& grid, const Matrix& X1, const Matrix& X2) {
    const Vector ls = grid.lengthscales();
    const Matrix d2 = pairwise_sq_dist(X1, X2);
    std::vector<Matrix> stack;
    stack.reserve(static_cast<std::size_t>(ls.size()));
    for (Eigen::Index m = 0; m < ls.size(); ++m) {
        stack.emplace_back((d2.array() * (-0.5 / (ls(m) * ls(m)))).exp().matrix());
    }
    return stack;
}

// ---------------------------------------------------------------------------

Vector Kernel::diag(const Matrix& X) const { return Vector::Constant(X.rows(), amplitude()); }

void Kernel::set_amplitude(double a) {
    if (!(a > 0.0)) throw DomainError("kernel amplitude must be positive");
    log_amplitude_ = std::log(a);
}

void Kernel::check_input(const Matrix& X1, const Matrix& X2, const char* where) const {
    require_cols(X1, input_dim(), where);
    require_cols(X2, input_dim(), where);
}

// ---------------------------------------------------------------------------

RbfKernel::RbfKernel(Eigen::Index input_dim, double amplitude, double lengthscale) : dim_(input_dim) {
    if (!(lengthscale > 0.0)) throw DomainError("RbfKernel: lengthscale must be positive");
    set_amplitude(amplitude);
    log_lengthscale_ = std::log(lengthscale);
}

Matrix RbfKernel::gram(const Matrix& X1, const Matrix& X2) const {
    check_input(X1, X2, "RbfKernel::gram");
    const double l = lengthscale();
    return (amplitude() * (pairwise_sq_dist(X1, X2).array() * (-0.5 / (l * l))).exp()).matrix();
}

GramWithGrads RbfKernel::gram_with_grads(const Matrix& X) const {
    check_input(X, X, "RbfKernel::gram_with_grads");
    const double l = lengthscale();
    Matrix d2 = pairwise_sq_dist(X, X);
    Matrix G = (amplitude() * (d2.array() * (-0.5 / (l * l))).exp()).matrix();
    GramWithGrads out;
    out.gram = G;
    out.contract = [G = std::move(G), d2 = std::move(d2), l](const Matrix& B) {
        Vector g(2);
        g(0) = (B.array() * G.array()).sum();
        g(1) = (B.array() * G.array() * d2.array()).sum() / (l * l);
        return g;
    };
    return out;
}

Vector RbfKernel::params() const { return Vector{{log_amplitude_, log_lengthscale_}}; }

void RbfKernel::set_params(const Vector& flat) {
    if (flat.size() != 2) throw ShapeError("RbfKernel::set_params: expected 2 values");
    log_amplitude_ = flat(0);
    log_lengthscale_ = flat(1);
}

std::vector<ParamGroup> RbfKernel::param_groups() const { return {ParamGroup::Hyper, ParamGroup::Hyper}; }

// ---------------------------------------------------------------------------

std::string to_string(AkVariant v) {
    switch (v) {
        case AkVariant::Full: return "full";
        case AkVariant::WeightOnly: return "weight";
        case AkVariant::MaskOnly: return "mask";
        case AkVariant::TwoNets: return "nnx2";
    }
    return "unknown";
}

AttentiveKernel::AttentiveKernel(LengthscaleGrid grid, nn::MlpParams net, double amplitude, AkVariant variant,
                                 std::optional<nn::MlpParams> second_net)
    : grid_(grid), net_(std::move(net)), variant_(variant), second_net_(std::move(second_net)) {
    grid_.validate();
    net_.check_shapes();
    set_amplitude(amplitude);
    if (net_.out_dim() != grid_.count) throw ShapeError("AttentiveKernel: network out_dim must equal M");
    if (variant_ == AkVariant::TwoNets) {
        if (!second_net_) throw ShapeError("AttentiveKernel: two-network variant needs a second network");
        second_net_->check_shapes();
        if (second_net_->out_dim() != grid_.count || second_net_->in_dim() != net_.in_dim()) {
            throw ShapeError("AttentiveKernel: second network shape mismatch");
        }
    } else {
        second_net_.reset();
    }
}

std::string AttentiveKernel::name() const {
    switch (variant_) {
        case AkVariant::Full: return "ak";
        case AkVariant::WeightOnly: return "ak-weight";
        case AkVariant::MaskOnly: return "ak-mask";
        case AkVariant::TwoNets: return "ak-nnx2";
    }
    return "ak";
}

Attention AttentiveKernel::attention(const Matrix& X) const {
    require_cols(X, input_dim(), "AttentiveKernel::attention");
    Attention a;
    const Matrix rep = represent(net_, X).unit;
    switch (variant_) {
        case AkVariant::Full:
            a.weights = rep;
            a.memberships = rep;
            break;
        case AkVariant::WeightOnly:
            a.weights = rep;
            break;
        case AkVariant::MaskOnly:
            a.weights = Matrix::Constant(X.rows(), grid_.count, 1.0 / std::sqrt(static_cast<double>(grid_.count)));
            a.memberships = rep;
            break;
        case AkVariant::TwoNets:
            a.weights = rep;
            a.memberships = represent(*second_net_, X).unit;
            break;
    }
    return a;
}

Matrix AttentiveKernel::gram(const Matrix& X1, const Matrix& X2) const {
    check_input(X1, X2, "AttentiveKernel::gram");
    const Attention a1 = attention(X1);
    const Attention a2 = attention(X2);
    const Vector ls = grid_.lengthscales();
    const Matrix d2 = pairwise_sq_dist(X1, X2);

    Matrix S = Matrix::Zero(X1.rows(), X2.rows());
    for (Eigen::Index m = 0; m < ls.size(); ++m) {
        S.array() += (d2.array() * (-0.5 / (ls(m) * ls(m)))).exp() *
                     (a1.weights.col(m) * a2.weights.col(m).transpose()).array();
    }
    if (a1.memberships.size() > 0) S.array() *= (a1.memberships * a2.memberships.transpose()).array();
    return amplitude() * S;
}

GramWithGrads AttentiveKernel::gram_with_grads(const Matrix& X) const {
    check_input(X, X, "AttentiveKernel::gram_with_grads");
    const Representation r1 = represent(net_, X);
    std::optional<Representation> r2;
    if (variant_ == AkVariant::TwoNets) r2 = represent(*second_net_, X);

    const Eigen::Index n = X.rows();
    const int M = grid_.count;
    Matrix w;
    Matrix z;
    switch (variant_) {
        case AkVariant::Full: w = r1.unit; z = r1.unit; break;
        case AkVariant::WeightOnly: w = r1.unit; break;
        case AkVariant::MaskOnly:
            w = Matrix::Constant(n, M, 1.0 / std::sqrt(static_cast<double>(M)));
            z = r1.unit;
            break;
        case AkVariant::TwoNets: w = r1.unit; z = r2->unit; break;
    }

    std::vector<Matrix> base = base_kernel_stack(grid_, X, X);
    Matrix S = Matrix::Zero(n, n);
    for (int m = 0; m < M; ++m) S.array() += base[m].array() * (w.col(m) * w.col(m).transpose()).array();
    Matrix O = z.size() ? Matrix(z * z.transpose()) : Matrix();
    Matrix G = amplitude() * (O.size() ? Matrix(S.cwiseProduct(O)) : S);

    GramWithGrads out;
    out.gram = G;
    out.contract = [self = std::make_shared<const AttentiveKernel>(*this), X, r1, r2, w = std::move(w), z = std::move(z), base = std::move(base), S = std::move(S),
                    O = std::move(O), G = std::move(G)](const Matrix& B) {
        const double alpha = self->amplitude();
        const AkVariant variant = self->variant_;
        const nn::MlpParams& net = self->net_;
        const Matrix Bs = B + B.transpose();
        Vector grad(self->num_params());
        grad(0) = (B.array() * G.array()).sum();

        // dL/dw and dL/dz in representation space.
        Matrix dw;
        if (variant != AkVariant::MaskOnly) {
            const Matrix P = O.size() ? Matrix(alpha * Bs.cwiseProduct(O)) : Matrix(alpha * Bs);
            dw.resize(w.rows(), w.cols());
            for (Eigen::Index m = 0; m < w.cols(); ++m) dw.col(m) = P.cwiseProduct(base[m]) * w.col(m);
        }
        Matrix dz;
        if (O.size()) dz = (alpha * Bs.cwiseProduct(S)) * z;

        const Eigen::Index n1 = net.num_params();
        switch (variant) {
            case AkVariant::Full: grad.segment(1, n1) = represent_backward(net, X, r1, dw + dz); break;
            case AkVariant::WeightOnly: grad.segment(1, n1) = represent_backward(net, X, r1, dw); break;
            case AkVariant::MaskOnly: grad.segment(1, n1) = represent_backward(net, X, r1, dz); break;
            case AkVariant::TwoNets:
                grad.segment(1, n1) = represent_backward(net, X, r1, dw);
                grad.segment(1 + n1, self->second_net_->num_params()) =
                    represent_backward(*self->second_net_, X, *r2, dz);
                break;
        }
        return grad;
    };
    return out;
}

Vector AttentiveKernel::params() const {
    const Eigen::Index n1 = net_.num_params();
    const Eigen::Index n2 = second_net_ ? second_net_->num_params() : 0;
    Vector p(1 + n1 + n2);
    p(0) = log_amplitude_;
    p.segment(1, n1) = net_.flatten();
    if (second_net_) p.segment(1 + n1, n2) = second_net_->flatten();
    return p;
}

void AttentiveKernel::set_params(const Vector& flat) {
    const Eigen::Index n1 = net_.num_params();
    const Eigen::Index n2 = second_net_ ? second_net_->num_params() : 0;
    if (flat.size() != 1 + n1 + n2) throw ShapeError("AttentiveKernel::set_params: wrong parameter count");
    log_amplitude_ = flat(0);
    net_.assign(flat.segment(1, n1));
    if (second_net_) second_net_->assign(flat.segment(1 + n1, n2));
}

std::vector<ParamGroup> AttentiveKernel::param_groups() const {
    std::vector<ParamGroup> groups(static_cast<std::size_t>(num_params()), ParamGroup::Net);
    groups[0] = ParamGroup::Hyper;
    return groups;
}

// ---------------------------------------------------------------------------

GibbsKernel::GibbsKernel(nn::MlpParams net, double amplitude, double l_min, double l_max)
    : net_(std::move(net)), l_min_(l_min), l_max_(l_max) {
    net_.check_shapes();
    if (net_.out_dim() != 1) throw ShapeError("GibbsKernel: lengthscale network must have one output");
    if (!(l_min > 0.0) || !(l_max > l_min)) throw DomainError("GibbsKernel: need 0 < l_min < l_max");
    set_amplitude(amplitude);
}

Vector GibbsKernel::lengthscales(const Matrix& X) const {
    const Vector raw = nn::mlp_forward(net_, X).col(0);
    return raw.unaryExpr([this](double v) { return l_min_ + (l_max_ - l_min_) * sigmoid(v); });
}

Matrix GibbsKernel::gram(const Matrix& X1, const Matrix& X2) const {
    check_input(X1, X2, "GibbsKernel::gram");
    const Vector l1 = lengthscales(X1);
    const Vector l2 = lengthscales(X2);
    const double half_dim = 0.5 * static_cast<double>(input_dim());
    const Matrix sum_sq = l1.array().square().matrix().replicate(1, X2.rows()) +
                          l2.array().square().matrix().transpose().replicate(X1.rows(), 1);
    const Matrix d2 = pairwise_sq_dist(X1, X2);
    const auto prefactor = (2.0 * (l1 * l2.transpose()).array() / sum_sq.array()).pow(half_dim);
    return (amplitude() * prefactor * (-d2.array() / sum_sq.array()).exp()).matrix();
}

GramWithGrads GibbsKernel::gram_with_grads(const Matrix& X) const {
    check_input(X, X, "GibbsKernel::gram_with_grads");
    const Vector raw = nn::mlp_forward(net_, X).col(0);
    const Vector sig = raw.unaryExpr([](double v) { return sigmoid(v); });
    const Vector ls = (l_min_ + (l_max_ - l_min_) * sig.array()).matrix();
    const Eigen::Index n = X.rows();
    const double half_dim = 0.5 * static_cast<double>(input_dim());

    Matrix sum_sq = ls.array().square().matrix().replicate(1, n) + ls.array().square().matrix().transpose().replicate(n, 1);
    Matrix d2 = pairwise_sq_dist(X, X);
    Matrix G = (amplitude() * (2.0 * (ls * ls.transpose()).array() / sum_sq.array()).pow(half_dim) *
                (-d2.array() / sum_sq.array()).exp())
                   .matrix();

    GramWithGrads out;
    out.gram = G;
    out.contract = [net = net_, span = l_max_ - l_min_, X, sig, ls, half_dim, sum_sq = std::move(sum_sq), d2 = std::move(d2),
                    G = std::move(G)](const Matrix& B) {
        Vector grad(1 + net.num_params());
        grad(0) = (B.array() * G.array()).sum();
        const Matrix Bs = B + B.transpose();
        const Eigen::Index n = X.rows();
        // E(i, j) = dG(i, j) / d l_i through the first argument slot.
        const Matrix li = ls.replicate(1, n);
        const Matrix E = (G.array() * (half_dim * (1.0 / li.array() - 2.0 * li.array() / sum_sq.array()) +
                                       2.0 * li.array() * d2.array() / sum_sq.array().square()))
                             .matrix();
        const Vector d_ls = (Bs.array() * E.array()).rowwise().sum();
        const Matrix d_raw = (d_ls.array() * span * sig.array() * (1.0 - sig.array())).matrix();
        grad.tail(net.num_params()) = nn::mlp_backward(net, X, d_raw).flatten();
        return grad;
    };
    return out;
}

Vector GibbsKernel::params() const {
    Vector p(1 + net_.num_params());
    p(0) = log_amplitude_;
    p.tail(net_.num_params()) = net_.flatten();
    return p;
}

void GibbsKernel::set_params(const Vector& flat) {
    if (flat.size() != 1 + net_.num_params()) throw ShapeError("GibbsKernel::set_params: wrong parameter count");
    log_amplitude_ = flat(0);
    net_.assign(flat.tail(net_.num_params()));
}

std::vector<ParamGroup> GibbsKernel::param_groups() const {
    std::vector<ParamGroup> groups(static_cast<std::size_t>(num_params()), ParamGroup::Net);
    groups[0] = ParamGroup::Hyper;
    return groups;
}

// ---------------------------------------------------------------------------

DeepKernel::DeepKernel(nn::MlpParams net, double amplitude, double lengthscale) : net_(std::move(net)) {
    net_.check_shapes();
    if (!(lengthscale > 0.0)) throw DomainError("DeepKernel: lengthscale must be positive");
    set_amplitude(amplitude);
    log_lengthscale_ = std::log(lengthscale);
}

Matrix DeepKernel::gram(const Matrix& X1, const Matrix& X2) const {
    check_input(X1, X2, "DeepKernel::gram");
    const double l = lengthscale();
    const Matrix d2 = pairwise_sq_dist(nn::mlp_forward(net_, X1), nn::mlp_forward(net_, X2));
    return (amplitude() * (d2.array() * (-0.5 / (l * l))).exp()).matrix();
}

GramWithGrads DeepKernel::gram_with_grads(const Matrix& X) const {
    check_input(X, X, "DeepKernel::gram_with_grads");
    const double l = lengthscale();
    Matrix F = nn::mlp_forward(net_, X);
    Matrix d2 = pairwise_sq_dist(F, F);
    Matrix G = (amplitude() * (d2.array() * (-0.5 / (l * l))).exp()).matrix();

    GramWithGrads out;
    out.gram = G;
    out.contract = [net = net_, X, l, F = std::move(F), d2 = std::move(d2), G = std::move(G)](const Matrix& B) {
        Vector grad(2 + net.num_params());
        grad(0) = (B.array() * G.array()).sum();
        grad(1) = (B.array() * G.array() * d2.array()).sum() / (l * l);
        const Matrix C = (B + B.transpose()).cwiseProduct(G);
        const Vector row_sums = C.rowwise().sum();
        const Matrix dF = -(row_sums.asDiagonal() * F - C * F) / (l * l);
        grad.tail(net.num_params()) = nn::mlp_backward(net, X, dF).flatten();
        return grad;
    };
    return out;
}

Vector DeepKernel::params() const {
    Vector p(2 + net_.num_params());
    p(0) = log_amplitude_;
    p(1) = log_lengthscale_;
    p.tail(net_.num_params()) = net_.flatten();
    return p;
}

void DeepKernel::set_params(const Vector& flat) {
    if (flat.size() != 2 + net_.num_params()) throw ShapeError("DeepKernel::set_params: wrong parameter count");
    log_amplitude_ = flat(0);
    log_lengthscale_ = flat(1);
    net_.assign(flat.tail(net_.num_params()));
}

std::vector<ParamGroup> DeepKernel::param_groups() const {
    std::vector<ParamGroup> groups(static_cast<std::size_t>(num_params()), ParamGroup::Net);
    groups[0] = ParamGroup::Hyper;
    groups[1] = ParamGroup::Hyper;
    return groups;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Kernel> make_kernel(const std::string& name, const KernelOptions& o, std::mt19937_64& rng) {
    const int D = static_cast<int>(o.input_dim);
    const int H = o.hidden_dim;
    const int M = o.grid.count;
    if (name == "rbf") return std::make_unique<RbfKernel>(o.input_dim, o.amplitude, o.rbf_lengthscale);
    if (name == "ak") {
        return std::make_unique<AttentiveKernel>(o.grid, nn::MlpParams::init(D, H, M, rng), o.amplitude);
    }
    if (name == "ak-weight") {
        return std::make_unique<AttentiveKernel>(o.grid, nn::MlpParams::init(D, H, M, rng), o.amplitude,
                                                 AkVariant::WeightOnly);
    }
    if (name == "ak-mask") {
        return std::make_unique<AttentiveKernel>(o.grid, nn::MlpParams::init(D, H, M, rng), o.amplitude,
                                                 AkVariant::MaskOnly);
    }
    if (name == "ak-nnx2") {
        auto first = nn::MlpParams::init(D, H, M, rng);
        auto second = nn::MlpParams::init(D, H, M, rng);
        return std::make_unique<AttentiveKernel>(o.grid, std::move(first), o.amplitude, AkVariant::TwoNets,
                                                 std::move(second));
    }
    if (name == "gibbs") {
        return std::make_unique<GibbsKernel>(nn::MlpParams::init(D, H, 1, rng), o.amplitude, o.grid.l_min,
                                             o.grid.l_max);
    }
    if (name == "dkl") {
        const int F = o.dkl_feature_dim > 0 ? o.dkl_feature_dim : D;
        return std::make_unique<DeepKernel>(nn::MlpParams::init(D, H, F, rng), o.amplitude, o.dkl_lengthscale);
    }
    throw ParseError("unknown kernel name '" + name + "'");
}

}  // namespace akgp::kernels
