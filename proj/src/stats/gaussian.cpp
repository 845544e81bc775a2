#include "resci/stats/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace resci::stats {

GaussianSuffStats correlation_from_data(const DataMatrix& x) {
    const Eigen::MatrixXd& v = x.values();
    const Eigen::RowVectorXd mean = v.colwise().mean();
    const Eigen::MatrixXd centered = v.rowwise() - mean;
    const Eigen::MatrixXd cov = centered.transpose() * centered;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        if (!(sd(j) > 0.0)) throw std::invalid_argument("column '" + x.names()[static_cast<std::size_t>(j)] + "' is constant");
    }
    GaussianSuffStats out;
    out.corr = cov.array() / (sd * sd.transpose()).array();
    for (Eigen::Index a = 0; a < out.corr.rows(); ++a) {
        out.corr(a, a) = 1.0;
        for (Eigen::Index b = a + 1; b < out.corr.cols(); ++b) {
            const double r = std::clamp(0.5 * (out.corr(a, b) + out.corr(b, a)), -1.0, 1.0);
            out.corr(a, b) = r;
            out.corr(b, a) = r;
        }
    }
    out.n = x.num_samples();
    return out;
}

PartialCorrelation partial_correlation_detail(const GaussianSuffStats& stats, int i, int j, NodeSet s) {
    const int d = stats.num_variables();
    if (i < 0 || j < 0 || i >= d || j >= d) throw std::out_of_range("partial correlation node out of range");
    if (i == j) throw std::invalid_argument("partial correlation needs i != j");
    if (s.contains(i) || s.contains(j)) throw std::invalid_argument("conditioning set must exclude i and j");

    double rho = 0.0;
    if (s.empty()) {
        rho = stats.corr(i, j);
    } else {
        std::vector<int> idx{i, j};
        for (int k : s) {
            if (k >= d) throw std::out_of_range("conditioning node out of range");
            idx.push_back(k);
        }
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd block(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) block(a, b) = stats.corr(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
        const Eigen::LLT<Eigen::MatrixXd> llt(block);
        if (llt.info() != Eigen::Success || llt.rcond() < kMinReciprocalCondition) {
            throw SingularMatrixError("correlation block for (" + std::to_string(i) + "," + std::to_string(j) + ")|" +
                                      s.to_string() + " is singular");
        }
        // First two columns of the inverse suffice.
        const Eigen::MatrixXd p = llt.solve(Eigen::MatrixXd::Identity(m, 2));
        rho = -p(0, 1) / std::sqrt(p(0, 0) * p(1, 1));
    }
    PartialCorrelation out{rho, false};
    constexpr double bound = 1.0 - kRhoClamp;
    if (!(std::abs(rho) <= bound)) {
        out.rho = rho > 0 ? bound : -bound;
        out.clamped = true;
    }
    return out;
}

std::optional<double> fisher_z(double rho, int n, int cond_size, bool half_factor) {
    const int dof = n - cond_size - 3;
    if (dof < 1) return std::nullopt;
    if (!(std::abs(rho) < 1.0)) throw std::domain_error("fisher_z needs |rho| < 1");
    const double transform = std::log1p(rho) - std::log1p(-rho);
    return (half_factor ? 0.5 : 1.0) * std::sqrt(static_cast<double>(dof)) * transform;
}

std::optional<TestStatistic> test_statistic(const GaussianSuffStats& stats, int i, int j, NodeSet s, bool half_factor) {
    if (stats.n - s.size() - 3 < 1) return std::nullopt;
    PartialCorrelation pc;
    try {
        pc = partial_correlation_detail(stats, i, j, s);
    } catch (const SingularMatrixError&) {
        return std::nullopt;
    }
    return TestStatistic{*fisher_z(pc.rho, stats.n, s.size(), half_factor), pc.rho, s.size(), pc.clamped};
}

}  // namespace resci::stats
