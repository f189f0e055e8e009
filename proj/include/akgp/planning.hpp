#ifndef AKGP_PLANNING_HPP
#define AKGP_PLANNING_HPP

#include <functional>
#include <random>

#include "akgp/common.hpp"
#include "akgp/environments.hpp"

namespace akgp::planning {

inline constexpr int kDefaultCandidates = 1000;

/// Holonomic point robot that tracks waypoints in straight lines.
struct RobotState {
    Vector position;
    double step_len = 0.1;
    double sample_spacing = 0.05;
    double distance_travelled = 0.0;
    long ticks = 0;
};

struct CandidateSet {
    Matrix locations;
    Vector entropies;
    Vector distances;  // to the robot; empty for pure active sampling
    Vector scores;
};

/// Predictive variance of observations at workspace locations.
using VarianceFn = std::function<Vector(const Matrix& locations)>;

/// 0.5 ln(2 pi e v). Throws DomainError for v <= 0.
double gaussian_entropy(double variance);

/// Index of the largest entry; the lowest index wins ties.
Eigen::Index argmax_first(const Vector& values);

/// Maps values to [0, 1] by min-max scaling; a constant vector maps to zeros.
Vector min_max_normalize(const Vector& values);

Vector random_waypoint(const Bounds& bounds, std::mt19937_64& rng);
Matrix random_locations(const Bounds& bounds, int count, std::mt19937_64& rng);

/// Entropy of every candidate; score equals entropy.
CandidateSet score_by_entropy(const Matrix& locations, const Vector& variances);

/// Normalized entropy minus normalized distance to `robot_position`.
CandidateSet score_informative(const Matrix& locations, const Vector& variances, const Vector& robot_position);

/// Highest-entropy location among `num_candidates` uniform draws.
Vector active_waypoint(const VarianceFn& variance, const Bounds& bounds, std::mt19937_64& rng,
                       int num_candidates = kDefaultCandidates, CandidateSet* inspect = nullptr);

/// Myopic planner: highest normalized-entropy-minus-normalized-distance score.
Vector informative_waypoint(const VarianceFn& variance, const RobotState& robot, const Bounds& bounds,
                            std::mt19937_64& rng, int num_candidates = kDefaultCandidates,
                            CandidateSet* inspect = nullptr);

/// Sample locations along the segment start -> goal: max(1, floor(L / spacing) + 1)
/// evenly spaced points including both ends (just `goal` for a zero-length path).
Matrix path_samples(const Vector& start, const Vector& goal, double spacing);

struct TrackResult {
    Matrix locations;
    Vector observations;
};

/// Drives the robot to `waypoint` (clamped into `bounds`) in step_len ticks and
/// observes the environment along the way.
TrackResult track_and_sample(RobotState& robot, const Vector& waypoint, const env::Environment& environment,
                             const Bounds& bounds, std::mt19937_64& rng);

}  // namespace akgp::planning

#endif  // AKGP_PLANNING_HPP
