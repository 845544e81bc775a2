#pragma once

#include <Eigen/Dense>
#include <optional>

#include "resci/node_set.hpp"
#include "resci/stats/data.hpp"

namespace resci::stats {

/// Sample correlation matrix and sample size.
struct GaussianSuffStats {
    Eigen::MatrixXd corr;
    int n = 0;

    int num_variables() const { return static_cast<int>(corr.rows()); }
};

/// Pearson correlation of every column pair. Throws std::invalid_argument on
/// a constant column.
GaussianSuffStats correlation_from_data(const DataMatrix& x);

/// Partial correlations are clamped to +/-(1 - kRhoClamp).
inline constexpr double kRhoClamp = 1e-12;
/// Reciprocal condition number below which a correlation block is singular.
inline constexpr double kMinReciprocalCondition = 1e-12;

struct PartialCorrelation {
    double rho = 0.0;
    bool clamped = false;
};

/// rho_{ij|s} = -P_ij / sqrt(P_ii P_jj), P the inverse of the correlation
/// block on {i, j} u s. Throws SingularMatrixError when that block is
/// numerically singular.
PartialCorrelation partial_correlation_detail(const GaussianSuffStats& stats, int i, int j, NodeSet s);

inline double partial_correlation(const GaussianSuffStats& stats, int i, int j, NodeSet s) {
    return partial_correlation_detail(stats, i, j, s).rho;
}

/// Fisher z statistic sqrt(n - |s| - 3) * atanh-type transform of rho. With
/// half_factor the usual 1/2 is applied, giving N(0, 1) under the null;
/// without it the statistic is twice as large. nullopt when
/// n - cond_size - 3 < 1 (the test cannot be run).
std::optional<double> fisher_z(double rho, int n, int cond_size, bool half_factor = true);

struct TestStatistic {
    double z = 0.0;
    double rho = 0.0;
    int cond_size = 0;
    bool clamped = false;
};

/// Partial correlation plus Fisher z; nullopt when the test cannot be run
/// (too few degrees of freedom or a singular block).
std::optional<TestStatistic> test_statistic(const GaussianSuffStats& stats, int i, int j, NodeSet s,
                                            bool half_factor = true);

}  // namespace resci::stats
