#include "akgp/metrics.hpp"

#include <cmath>
#include <numbers>

namespace akgp::metrics {

namespace {

void require_same_nonempty(const Vector& a, const Vector& b, const char* where) {
    if (a.size() == 0) throw DomainError(std::string(where) + ": empty input");
    if (a.size() != b.size()) throw ShapeError(std::string(where) + ": length mismatch");
}

}  // namespace

double smse(const Vector& y_true, const Vector& mean) {
    require_same_nonempty(y_true, mean, "smse");
    if (y_true.size() < 2) throw DomainError("smse: need at least two test points");
    const double var = (y_true.array() - y_true.mean()).square().mean();
    if (!(var > 0.0)) throw DomainError("smse: test targets have zero variance");
    return (y_true - mean).squaredNorm() / static_cast<double>(y_true.size()) / var;
}

double nlpd(const Vector& y_true, const Vector& mean, const Vector& variance) {
    require_same_nonempty(y_true, mean, "nlpd");
    require_same_nonempty(y_true, variance, "nlpd");
    if ((variance.array() <= 0.0).any()) throw DomainError("nlpd: predictive variance must be positive");
    const auto loss = 0.5 * (2.0 * std::numbers::pi * variance.array()).log() +
                      (y_true - mean).array().square() / (2.0 * variance.array());
    return loss.mean();
}

double msll(const Vector& y_true, const Vector& mean, const Vector& variance, double train_mean, double train_var) {
    if (!(train_var > 0.0)) throw DomainError("msll: training variance must be positive");
    const Vector trivial_mean = Vector::Constant(y_true.size(), train_mean);
    const Vector trivial_var = Vector::Constant(y_true.size(), train_var);
    return nlpd(y_true, mean, variance) - nlpd(y_true, trivial_mean, trivial_var);
}

double rmse(const Vector& y_true, const Vector& mean) {
    require_same_nonempty(y_true, mean, "rmse");
    return std::sqrt((y_true - mean).squaredNorm() / static_cast<double>(y_true.size()));
}

double mae(const Vector& y_true, const Vector& mean) {
    require_same_nonempty(y_true, mean, "mae");
    return (y_true - mean).cwiseAbs().mean();
}

MetricsRecord evaluate(const Vector& y_true, const Vector& mean, const Vector& variance, double train_mean,
                       double train_var) {
    MetricsRecord r;
    r.smse = smse(y_true, mean);
    r.nlpd = nlpd(y_true, mean, variance);
    r.msll = msll(y_true, mean, variance, train_mean, train_var);
    r.rmse = rmse(y_true, mean);
    r.mae = mae(y_true, mean);
    return r;
}

MetricsRecord curve_average(const std::vector<MetricsRecord>& curve) {
    if (curve.empty()) throw DomainError("curve_average: empty curve");
    MetricsRecord avg;
    for (const auto& r : curve) {
        avg.smse += r.smse;
        avg.msll += r.msll;
        avg.nlpd += r.nlpd;
        avg.rmse += r.rmse;
        avg.mae += r.mae;
        avg.wall_time_s += r.wall_time_s;
    }
    const double n = static_cast<double>(curve.size());
    avg.smse /= n;
    avg.msll /= n;
    avg.nlpd /= n;
    avg.rmse /= n;
    avg.mae /= n;
    avg.wall_time_s /= n;
    avg.num_samples = curve.back().num_samples;
    return avg;
}

}  // namespace akgp::metrics
