#include <doctest.h>

#include <random>

#include "akgp/nn.hpp"
#include "oracles.hpp"

using namespace akgp;

TEST_CASE("mlp_forward matches the scalar oracle") {
    std::mt19937_64 rng(1);
    const auto p = nn::MlpParams::init(3, 7, 4, rng);
    const Matrix X = oracle::uniform_matrix(5, 3, -1, 1, rng);
    const Matrix out = nn::mlp_forward(p, X);
    REQUIRE(out.rows() == 5);
    REQUIRE(out.cols() == 4);
    for (Eigen::Index i = 0; i < 5; ++i) {
        const auto ref = oracle::mlp(p, oracle::row(X, i));
        for (Eigen::Index j = 0; j < 4; ++j) CHECK(out(i, j) == doctest::Approx(ref[j]).epsilon(1e-13));
    }
}

TEST_CASE("init ranges and flatten/assign round trip") {
    std::mt19937_64 rng(2);
    const auto p = nn::MlpParams::init(2, 10, 5, rng);
    CHECK(p.num_params() == 2 * 10 + 10 + 10 * 10 + 10 + 10 * 5 + 5);
    CHECK(p.weights[0].cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(2.0));
    CHECK(p.weights[1].cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(10.0));
    CHECK(p.biases[0].isZero());
    const Vector flat = p.flatten();
    auto q = nn::MlpParams::zeros(2, 10, 5);
    q.assign(flat);
    CHECK(q.flatten() == flat);
    CHECK_THROWS_AS(q.assign(Vector::Zero(3)), ShapeError);
}

TEST_CASE("mlp_backward matches finite differences") {
    std::mt19937_64 rng(3);
    const auto p = nn::MlpParams::init(2, 6, 3, rng);
    const Matrix X = oracle::uniform_matrix(4, 2, -1, 1, rng);
    const Matrix U = oracle::uniform_matrix(4, 3, -1, 1, rng);
    const Vector analytic = nn::mlp_backward(p, X, U).flatten();
    auto f = [&](const Vector& theta) {
        auto q = p;
        q.assign(theta);
        return (nn::mlp_forward(q, X).array() * U.array()).sum();
    };
    const Vector fd = oracle::central_diff(f, p.flatten());
    CHECK((analytic - fd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("softmax rows sum to one and are shift invariant") {
    Matrix raw(2, 3);
    raw << 1.0, 2.0, 3.0, 1000.0, 1000.0, 1000.0;
    const Matrix p = nn::softmax_rows(raw);
    CHECK(p.row(0).sum() == doctest::Approx(1.0));
    CHECK(p(1, 0) == doctest::Approx(1.0 / 3.0));
    const auto ref = oracle::softmax({1.0, 2.0, 3.0});
    for (int j = 0; j < 3; ++j) CHECK(p(0, j) == doctest::Approx(ref[j]));
    Matrix bad = raw;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(nn::softmax_rows(bad), NumericalError);
}

TEST_CASE("softmax and l2 normalization backward passes") {
    std::mt19937_64 rng(4);
    const Matrix raw = oracle::uniform_matrix(3, 4, -2, 2, rng);
    const Matrix U = oracle::uniform_matrix(3, 4, -1, 1, rng);

    auto chain = [&](const Vector& flat) {
        const Matrix r = Eigen::Map<const Matrix>(flat.data(), 3, 4);
        return (nn::l2_normalize_rows(nn::softmax_rows(r)).array() * U.array()).sum();
    };
    const Matrix probs = nn::softmax_rows(raw);
    const Matrix d_probs = nn::l2_normalize_rows_backward(probs, U);
    const Matrix d_raw = nn::softmax_rows_backward(probs, d_probs);
    const Vector flat = Eigen::Map<const Vector>(raw.data(), raw.size());
    const Vector fd = oracle::central_diff(chain, flat);
    CHECK((Eigen::Map<const Vector>(d_raw.data(), d_raw.size()) - fd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("l2 normalization rejects zero rows") {
    Matrix W = Matrix::Zero(2, 3);
    W(0, 0) = 3.0;
    CHECK_THROWS_AS(nn::l2_normalize_rows(W), DomainError);
    W(1, 2) = 4.0;
    const Matrix n = nn::l2_normalize_rows(W);
    CHECK(n.rowwise().norm().isApprox(Vector::Ones(2)));
}
