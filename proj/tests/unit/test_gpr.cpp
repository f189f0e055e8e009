#include <doctest.h>

#include <random>

#include "akgp/gpr.hpp"
#include "oracles.hpp"

using namespace akgp;
using namespace akgp::gpr;

namespace {

GPRModel random_model(const std::string& name, std::mt19937_64& rng, Eigen::Index n, double noise = 0.3) {
    kernels::KernelOptions o;
    o.grid = {0.1, 0.8, 3};
    o.hidden_dim = 4;
    GPRModel m(kernels::make_kernel(name, o, rng), noise);
    const Matrix X = oracle::uniform_matrix(n, 2, -1, 1, rng);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = std::sin(3.0 * X(i, 0)) + X(i, 1) * X(i, 1);
    m.add_data(X, y);
    return m;
}

}  // namespace

TEST_CASE("posterior matches the dense-inverse oracle") {
    std::mt19937_64 rng(20);
    for (const char* name : {"rbf", "ak", "gibbs", "dkl"}) {
        CAPTURE(name);
        const GPRModel m = random_model(name, rng, 15);
        const Matrix Xs = oracle::uniform_matrix(6, 2, -1, 1, rng);
        const Prediction p = m.predict(Xs);
        const double nv = m.noise_scale() * m.noise_scale() + m.jitter();
        const auto ref = oracle::dense_posterior(m.kernel().gram(m.X_train()), m.kernel().gram(m.X_train(), Xs),
                                                 m.kernel().diag(Xs), m.y_train(), nv);
        CHECK((p.mean - ref.mean).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((p.variance - ref.variance).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(p.variance.minCoeff() >= 0.0);
    }
}

TEST_CASE("marginal likelihood matches the dense oracle") {
    std::mt19937_64 rng(21);
    for (const char* name : {"rbf", "ak", "gibbs", "dkl"}) {
        CAPTURE(name);
        const GPRModel m = random_model(name, rng, 12);
        const double nv = m.noise_scale() * m.noise_scale() + m.jitter();
        CHECK(m.log_marginal_likelihood() ==
              doctest::Approx(oracle::dense_lml(m.kernel().gram(m.X_train()), m.y_train(), nv)).epsilon(1e-10));
    }
}

TEST_CASE("marginal likelihood gradient matches central differences") {
    std::mt19937_64 rng(22);
    for (const char* name : {"rbf", "ak", "ak-weight", "ak-mask", "ak-nnx2", "gibbs", "dkl"}) {
        CAPTURE(name);
        GPRModel m = random_model(name, rng, 8);
        const LmlWithGradient lg = m.lml_with_gradient();
        CHECK(lg.value == doctest::Approx(m.log_marginal_likelihood()));
        const Vector p0 = m.params();
        auto f = [&](const Vector& p) {
            m.set_params(p);
            return m.log_marginal_likelihood();
        };
        const Vector fd = oracle::central_diff(f, p0, 1e-6);
        m.set_params(p0);
        for (Eigen::Index i = 0; i < fd.size(); ++i) {
            CHECK(std::abs(lg.gradient(i) - fd(i)) <= std::max(1e-7, 1e-4 * std::abs(fd(i))));
        }
    }
}

TEST_CASE("optimization improves the marginal likelihood") {
    std::mt19937_64 rng(23);
    GPRModel m = random_model("ak", rng, 30);
    const double before = m.log_marginal_likelihood();
    OptimizeOptions opt;
    opt.num_iters = 60;
    opt.lr_net = 1e-2;
    const OptimizeResult r = m.optimize(opt);
    CHECK_FALSE(r.aborted);
    CHECK(r.lml_trace.size() == 60);
    CHECK(r.lml_trace.front() == doctest::Approx(before));
    CHECK(m.log_marginal_likelihood() > before);
}

TEST_CASE("halving the learning rate keeps the trace non-decreasing") {
    std::mt19937_64 rng(24);
    GPRModel m = random_model("gibbs", rng, 20);
    OptimizeOptions opt;
    opt.num_iters = 40;
    opt.lr_hyper = 0.5;
    opt.lr_net = 0.5;
    opt.halve_lr_on_decrease = true;
    const OptimizeResult r = m.optimize(opt);
    REQUIRE_FALSE(r.aborted);
    for (std::size_t i = 1; i < r.lml_trace.size(); ++i) CHECK(r.lml_trace[i] >= r.lml_trace[i - 1]);
}

TEST_CASE("on_iteration sees every accepted step") {
    std::mt19937_64 rng(25);
    GPRModel m = random_model("rbf", rng, 10);
    int calls = 0;
    OptimizeOptions opt;
    opt.num_iters = 5;
    opt.on_iteration = [&](int iter, const GPRModel& model) {
        CHECK(iter == calls);
        CHECK(std::isfinite(model.log_marginal_likelihood()));
        ++calls;
    };
    m.optimize(opt);
    CHECK(calls == 5);
}

TEST_CASE("parameter layout and groups") {
    std::mt19937_64 rng(26);
    GPRModel m = random_model("ak", rng, 5, 0.25);
    const Vector p = m.params();
    CHECK(p(0) == doctest::Approx(std::log(0.25)));
    CHECK(p.size() == 1 + m.kernel().num_params());
    const auto groups = m.param_groups();
    CHECK(groups[0] == kernels::ParamGroup::Hyper);
    CHECK(groups[1] == kernels::ParamGroup::Hyper);
    CHECK(groups.back() == kernels::ParamGroup::Net);
}

TEST_CASE("error handling") {
    std::mt19937_64 rng(27);
    kernels::KernelOptions o;
    GPRModel empty(kernels::make_kernel("rbf", o, rng));
    CHECK_THROWS_AS((void)empty.predict(Matrix::Zero(1, 2)), DomainError);
    CHECK_THROWS_AS((void)empty.log_marginal_likelihood(), DomainError);
    CHECK_THROWS_AS(empty.add_data(Matrix::Zero(3, 2), Vector::Zero(2)), ShapeError);
    CHECK_THROWS_AS(empty.add_data(Matrix::Zero(3, 1), Vector::Zero(3)), ShapeError);
    CHECK_THROWS_AS(GPRModel(kernels::make_kernel("rbf", o, rng), -1.0), DomainError);
}

TEST_CASE("duplicate inputs with tiny noise trigger jitter") {
    std::mt19937_64 rng(28);
    kernels::KernelOptions o;
    GPRModel m(kernels::make_kernel("rbf", o, rng), 1e-12);
    Matrix X(3, 2);
    X << 0.1, 0.2, 0.1, 0.2, 0.1, 0.2;
    m.add_data(X, Vector::Constant(3, 1.0));
    CHECK(m.jitter() > 0.0);
    CHECK(m.predict(X).mean.allFinite());
}

TEST_CASE("copies are independent") {
    std::mt19937_64 rng(29);
    GPRModel a = random_model("ak", rng, 6);
    GPRModel b = a;
    Vector p = b.params();
    p(1) += 1.0;
    b.set_params(p);
    CHECK(a.params()(1) != b.params()(1));
    CHECK(a.log_marginal_likelihood() != b.log_marginal_likelihood());
}
