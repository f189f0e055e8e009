#include "akgp/planning.hpp"

#include <cmath>
#include <numbers>

namespace akgp::planning {

double gaussian_entropy(double variance) {
    if (!(variance > 0.0)) throw DomainError("gaussian_entropy: variance must be positive");
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

Eigen::Index argmax_first(const Vector& values) {
    if (values.size() == 0) throw DomainError("argmax_first: empty vector");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        if (values(i) > values(best)) best = i;
    }
    return best;
}

Vector min_max_normalize(const Vector& values) {
    if (values.size() == 0) return values;
    const double lo = values.minCoeff();
    const double range = values.maxCoeff() - lo;
    if (!(range > 0.0)) return Vector::Zero(values.size());
    return ((values.array() - lo) / range).matrix();
}

Vector random_waypoint(const Bounds& bounds, std::mt19937_64& rng) {
    Vector p(bounds.dim());
    for (Eigen::Index d = 0; d < bounds.dim(); ++d) {
        std::uniform_real_distribution<double> dist(bounds.lower(d), bounds.upper(d));
        p(d) = bounds.lower(d) == bounds.upper(d) ? bounds.lower(d) : dist(rng);
    }
    return p;
}

Matrix random_locations(const Bounds& bounds, int count, std::mt19937_64& rng) {
    Matrix out(count, bounds.dim());
    for (int i = 0; i < count; ++i) out.row(i) = random_waypoint(bounds, rng).transpose();
    return out;
}

CandidateSet score_by_entropy(const Matrix& locations, const Vector& variances) {
    if (variances.size() != locations.rows()) throw ShapeError("score_by_entropy: one variance per candidate");
    CandidateSet set;
    set.locations = locations;
    set.entropies = variances.unaryExpr([](double v) { return gaussian_entropy(v); });
    set.scores = set.entropies;
    return set;
}

CandidateSet score_informative(const Matrix& locations, const Vector& variances, const Vector& robot_position) {
    CandidateSet set = score_by_entropy(locations, variances);
    require_cols(locations, robot_position.size(), "score_informative");
    set.distances = (locations.rowwise() - robot_position.transpose()).rowwise().norm();
    set.scores = min_max_normalize(set.entropies) - min_max_normalize(set.distances);
    return set;
}

Vector active_waypoint(const VarianceFn& variance, const Bounds& bounds, std::mt19937_64& rng, int num_candidates,
                       CandidateSet* inspect) {
    const Matrix candidates = random_locations(bounds, num_candidates, rng);
    CandidateSet set = score_by_entropy(candidates, variance(candidates));
    const Vector best = set.locations.row(argmax_first(set.scores)).transpose();
    if (inspect) *inspect = std::move(set);
    return best;
}

Vector informative_waypoint(const VarianceFn& variance, const RobotState& robot, const Bounds& bounds,
                            std::mt19937_64& rng, int num_candidates, CandidateSet* inspect) {
    const Matrix candidates = random_locations(bounds, num_candidates, rng);
    CandidateSet set = score_informative(candidates, variance(candidates), robot.position);
    const Vector best = set.locations.row(argmax_first(set.scores)).transpose();
    if (inspect) *inspect = std::move(set);
    return best;
}

Matrix path_samples(const Vector& start, const Vector& goal, double spacing) {
    if (!(spacing > 0.0)) throw DomainError("path_samples: spacing must be positive");
    if (start.size() != goal.size()) throw ShapeError("path_samples: start and goal differ in dimension");
    const double length = (goal - start).norm();
    const auto count = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(length / spacing)) + 1);
    Matrix out(count, start.size());
    if (count == 1) {
        out.row(0) = goal.transpose();
        return out;
    }
    for (Eigen::Index j = 0; j < count; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(count - 1);
        out.row(j) = ((1.0 - t) * start + t * goal).transpose();
    }
    return out;
}

TrackResult track_and_sample(RobotState& robot, const Vector& waypoint, const env::Environment& environment,
                             const Bounds& bounds, std::mt19937_64& rng) {
    if (!(robot.step_len > 0.0) || !(robot.sample_spacing > 0.0)) {
        throw DomainError("track_and_sample: step_len and sample_spacing must be positive");
    }
    const Vector goal = bounds.clamp(waypoint);
    const Vector start = robot.position;
    const double length = (goal - start).norm();

    TrackResult result;
    result.locations = path_samples(start, goal, robot.sample_spacing);
    result.observations = env::observe(environment, result.locations, rng);

    // Straight-line tracking: the robot reaches the goal after ceil(L / step_len) ticks.
    robot.position = goal;
    robot.distance_travelled += length;
    robot.ticks += static_cast<long>(std::ceil(length / robot.step_len));
    return result;
}

}  // namespace akgp::planning
