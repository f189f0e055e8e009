#ifndef AKGP_METRICS_HPP
#define AKGP_METRICS_HPP

#include <vector>

#include "akgp/common.hpp"

namespace akgp::metrics {

struct MetricsRecord {
    long num_samples = 0;
    double smse = 0.0;
    double msll = 0.0;
    double nlpd = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double wall_time_s = 0.0;
};

/// Mean squared error over the population variance of y_true.
double smse(const Vector& y_true, const Vector& mean);

/// Mean Gaussian negative log predictive density.
double nlpd(const Vector& y_true, const Vector& mean, const Vector& variance);

/// nlpd minus the loss of the trivial N(train_mean, train_var) predictor.
double msll(const Vector& y_true, const Vector& mean, const Vector& variance, double train_mean, double train_var);

double rmse(const Vector& y_true, const Vector& mean);
double mae(const Vector& y_true, const Vector& mean);

/// All five metrics at once (num_samples and wall time left for the caller).
MetricsRecord evaluate(const Vector& y_true, const Vector& mean, const Vector& variance, double train_mean,
                       double train_var);

/// Per-metric mean over a curve: the area under the metric-vs-samples curve
/// divided by its length, with every record weighted equally.
MetricsRecord curve_average(const std::vector<MetricsRecord>& curve);

}  // namespace akgp::metrics

#endif  // AKGP_METRICS_HPP
