#pragma once

#include <random>

#include <Eigen/Dense>

#include "resci/graph/mixed_graph.hpp"
#include "resci/stats/data.hpp"

namespace resci::simulation {

using Rng = std::mt19937_64;

/// DAG with one weight per edge; weights(k, j) is the weight of k -> j and
/// zero off the edge set.
struct WeightedDag {
    graph::Dag dag;
    Eigen::MatrixXd weights;

    int num_nodes() const { return dag.num_nodes(); }
};

/// Topological order 0..d-1; every forward pair i < j becomes an edge with
/// probability expected_neighbors / (d - 1).
/// Throws std::invalid_argument unless d >= 2 and 0 < expected_neighbors <= d - 1.
graph::Dag random_dag(int d, double expected_neighbors, Rng& rng);

/// Raw weights uniform on (-1, -0.5) u (0.5, 1), then each child's incoming
/// weights divided by sqrt(sum of squared raw weights + 1).
WeightedDag draw_and_scale_weights(const graph::Dag& dag, Rng& rng);

/// Divides each child's incoming raw weights by sqrt(sum w^2 + 1).
Eigen::MatrixXd scale_weights(const Eigen::MatrixXd& raw);

/// n draws of X_j = sum_k w_kj X_k + e_j with e_j ~ N(0, 1), generated in
/// topological order. Columns are named X1..Xd.
stats::DataMatrix sample_sem(const WeightedDag& wd, int n, Rng& rng);

/// Covariance implied by unit noise variances: B^T B with B = (I - W)^-1.
Eigen::MatrixXd implied_covariance(const WeightedDag& wd);

/// ((I - W)^-1)(exposure, outcome): the sum over directed paths of weight
/// products.
double total_effect_series(const WeightedDag& wd, int exposure, int outcome);

/// Population coefficient of the exposure in the regression of the outcome
/// on the exposure and its parents, from the implied covariance.
double population_regression_effect(const WeightedDag& wd, int exposure, int outcome);

inline constexpr double kEffectAgreementTolerance = 1e-10;

/// Total effect, cross-checked against the population regression. Throws
/// std::logic_error if the two disagree by more than the tolerance.
double true_effect(const WeightedDag& wd, int exposure, int outcome);

}  // namespace resci::simulation
