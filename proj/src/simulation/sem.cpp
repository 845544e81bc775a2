#include "resci/simulation/sem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace resci::simulation {

graph::Dag random_dag(int d, double expected_neighbors, Rng& rng) {
    if (d < 2) throw std::invalid_argument("random_dag needs d >= 2");
    if (!(expected_neighbors > 0.0 && expected_neighbors <= d - 1))
        throw std::invalid_argument("expected_neighbors must be in (0, d-1]");
    const double p = expected_neighbors / static_cast<double>(d - 1);
    std::bernoulli_distribution coin(p);
    graph::Dag dag(d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (coin(rng)) dag.add_edge(i, j);
    return dag;
}

Eigen::MatrixXd scale_weights(const Eigen::MatrixXd& raw) {
    Eigen::MatrixXd w = raw;
    for (Eigen::Index j = 0; j < w.cols(); ++j) w.col(j) /= std::sqrt(raw.col(j).squaredNorm() + 1.0);
    return w;
}

WeightedDag draw_and_scale_weights(const graph::Dag& dag, Rng& rng) {
    const int d = dag.num_nodes();
    std::uniform_real_distribution<double> magnitude(0.5, 1.0);
    std::bernoulli_distribution negative(0.5);
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(d, d);
    for (const auto& [parent, child] : dag.edges()) {
        double m = magnitude(rng);
        while (m == 0.5) m = magnitude(rng);
        raw(parent, child) = negative(rng) ? -m : m;
    }
    return WeightedDag{dag, scale_weights(raw)};
}

stats::DataMatrix sample_sem(const WeightedDag& wd, int n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_sem needs n >= 2");
    const int d = wd.num_nodes();
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd x(n, d);
    for (int j : wd.dag.topological_order()) {
        for (int r = 0; r < n; ++r) x(r, j) = noise(rng);
        for (int k : wd.dag.parents(j)) x.col(j) += wd.weights(k, j) * x.col(k);
    }
    return stats::DataMatrix(std::move(x));
}

Eigen::MatrixXd implied_covariance(const WeightedDag& wd) {
    const int d = wd.num_nodes();
    const Eigen::MatrixXd b = (Eigen::MatrixXd::Identity(d, d) - wd.weights).fullPivLu().inverse();
    return b.transpose() * b;
}

double total_effect_series(const WeightedDag& wd, int exposure, int outcome) {
    const int d = wd.num_nodes();
    const Eigen::MatrixXd b = (Eigen::MatrixXd::Identity(d, d) - wd.weights).fullPivLu().inverse();
    return b(exposure, outcome);
}

double population_regression_effect(const WeightedDag& wd, int exposure, int outcome) {
    const NodeSet parents = wd.dag.parents(exposure);
    if (parents.contains(outcome)) return 0.0;
    std::vector<int> idx{exposure};
    for (int k : parents) idx.push_back(k);
    const Eigen::MatrixXd sigma = implied_covariance(wd);
    const auto p = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sxx(p, p);
    Eigen::VectorXd sxy(p);
    for (Eigen::Index a = 0; a < p; ++a) {
        sxy(a) = sigma(idx[static_cast<std::size_t>(a)], outcome);
        for (Eigen::Index b = 0; b < p; ++b) sxx(a, b) = sigma(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
    return sxx.ldlt().solve(sxy)(0);
}

double true_effect(const WeightedDag& wd, int exposure, int outcome) {
    const int d = wd.num_nodes();
    if (exposure < 0 || exposure >= d || outcome < 0 || outcome >= d) throw std::out_of_range("node out of range");
    const double series = total_effect_series(wd, exposure, outcome);
    const double regression = population_regression_effect(wd, exposure, outcome);
    if (std::abs(series - regression) > kEffectAgreementTolerance)
        throw std::logic_error("total effect " + std::to_string(series) + " disagrees with population regression " +
                               std::to_string(regression));
    return series;
}

}  // namespace resci::simulation
