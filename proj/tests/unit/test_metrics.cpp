#include <doctest.h>

#include <cmath>
#include <numbers>

#include "akgp/metrics.hpp"

using namespace akgp;
using namespace akgp::metrics;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) out(i++) = e;
    return out;
}

}  // namespace

TEST_CASE("smse closed forms") {
    const Vector y = vec({1.0, 2.0, 4.0, 7.0});
    CHECK(smse(y, y) == 0.0);
    CHECK(smse(y, Vector::Constant(4, y.mean())) == 1.0);
    const double var = (y.array() - y.mean()).square().mean();
    CHECK(smse(y, (y.array() + 0.5).matrix()) == doctest::Approx(0.25 / var));
    CHECK_THROWS_AS(smse(Vector::Constant(3, 2.0), Vector::Zero(3)), DomainError);
    CHECK_THROWS_AS(smse(vec({1.0}), vec({1.0})), DomainError);
    CHECK_THROWS_AS(smse(y, Vector::Zero(3)), ShapeError);
}

TEST_CASE("nlpd closed forms") {
    const Vector y = vec({0.3, -1.2});
    CHECK(std::abs(nlpd(y, y, Vector::Constant(2, 1.0 / (2.0 * std::numbers::pi)))) < 1e-15);
    CHECK(nlpd(y, y, Vector::Ones(2)) == doctest::Approx(0.918938533204673));
    const Vector far = (y.array() + 10.0).matrix();
    CHECK(nlpd(y, far, Vector::Constant(2, 2.0)) < nlpd(y, far, Vector::Ones(2)));
    CHECK_THROWS_AS(nlpd(y, y, vec({1.0, 0.0})), DomainError);
}

TEST_CASE("msll of the trivial model is zero and better predictors are negative") {
    const Vector y = vec({0.5, 1.5, -0.25, 3.0, 2.0});
    const double m = y.mean();
    const double v = (y.array() - m).square().mean();
    CHECK(msll(y, Vector::Constant(5, m), Vector::Constant(5, v), m, v) == 0.0);
    CHECK(msll(y, y, Vector::Constant(5, 0.01), m, v) < 0.0);
}

TEST_CASE("msll hand case with four points") {
    const Vector y = vec({1.0, 2.0, 3.0, 4.0});
    const Vector mu = vec({1.1, 1.8, 3.3, 3.9});
    const Vector nu = vec({0.5, 0.25, 1.0, 0.1});
    double model = 0.0, trivial = 0.0;
    for (int i = 0; i < 4; ++i) {
        model += 0.5 * std::log(2 * std::numbers::pi * nu(i)) + (y(i) - mu(i)) * (y(i) - mu(i)) / (2 * nu(i));
        trivial += 0.5 * std::log(2 * std::numbers::pi * 2.0) + (y(i) - 2.5) * (y(i) - 2.5) / (2 * 2.0);
    }
    CHECK(msll(y, mu, nu, 2.5, 2.0) == doctest::Approx((model - trivial) / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(msll(y, mu, nu, 2.5, 0.0), DomainError);
}

TEST_CASE("rmse and mae") {
    const Vector y = Vector::Zero(2);
    const Vector mu = vec({3.0, -4.0});
    CHECK(rmse(y, mu) == doctest::Approx(std::sqrt(12.5)));
    CHECK(mae(y, mu) == 3.5);
    CHECK(rmse(y, y) == 0.0);
    CHECK(rmse(y, mu) >= mae(y, mu));
    CHECK_THROWS(rmse(Vector(), Vector()));
}

TEST_CASE("metrics are permutation invariant and affine consistent") {
    const Vector y = vec({0.1, 0.9, -0.4, 1.7, 0.3});
    const Vector mu = vec({0.0, 1.0, -0.2, 1.5, 0.6});
    const Vector nu = vec({0.2, 0.3, 0.1, 0.4, 0.25});
    const MetricsRecord base = evaluate(y, mu, nu, 0.4, 0.5);

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
    perm.indices() << 4, 2, 0, 3, 1;
    const MetricsRecord shuffled = evaluate(perm * y, perm * mu, perm * nu, 0.4, 0.5);
    CHECK(shuffled.smse == doctest::Approx(base.smse));
    CHECK(shuffled.msll == doctest::Approx(base.msll));

    const double a = 7.5, b = -3.0;
    const MetricsRecord scaled = evaluate((a * y.array() + b).matrix(), (a * mu.array() + b).matrix(), a * a * nu,
                                          a * 0.4 + b, a * a * 0.5);
    CHECK(scaled.smse == doctest::Approx(base.smse).epsilon(1e-12));
    CHECK(scaled.msll == doctest::Approx(base.msll).epsilon(1e-12));
    CHECK(scaled.rmse == doctest::Approx(a * base.rmse));
}

TEST_CASE("curve average weights records equally") {
    std::vector<MetricsRecord> curve(3);
    curve[0] = {50, 1.0, -0.5, 1.0, 2.0, 1.5, 0.1};
    curve[1] = {51, 0.5, -1.0, 0.5, 1.0, 0.5, 0.2};
    curve[2] = {52, 0.0, -1.5, 0.0, 0.0, 0.1, 0.3};
    const MetricsRecord avg = curve_average(curve);
    CHECK(avg.smse == doctest::Approx(0.5));
    CHECK(avg.msll == doctest::Approx(-1.0));
    CHECK(avg.num_samples == 52);
    CHECK_THROWS_AS(curve_average({}), DomainError);
}
