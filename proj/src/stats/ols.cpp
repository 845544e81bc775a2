#include "resci/stats/ols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resci::stats {

EffectEstimate ols_effect(const DataMatrix& x, int exposure, int outcome, NodeSet adjust) {
    const int d = x.num_variables();
    if (exposure < 0 || outcome < 0 || exposure >= d || outcome >= d) throw std::out_of_range("node out of range");
    if (exposure == outcome) throw std::invalid_argument("exposure and outcome must differ");
    if (adjust.contains(exposure)) throw std::invalid_argument("adjustment set contains the exposure");
    if (adjust.contains(outcome)) throw std::invalid_argument("adjustment set contains the outcome");
    for (int k : adjust)
        if (k >= d) throw std::out_of_range("adjustment node out of range");

    const Eigen::Index n = x.num_samples();
    const Eigen::Index p = 2 + adjust.size();
    if (n - p < 1) throw SingularMatrixError("no residual degrees of freedom");

    Eigen::MatrixXd design(n, p);
    design.col(0).setOnes();
    design.col(1) = x.values().col(exposure);
    Eigen::Index col = 2;
    for (int k : adjust) design.col(col++) = x.values().col(k);
    const Eigen::VectorXd y = x.values().col(outcome);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kOlsRankTolerance);
    if (qr.rank() < p) throw SingularMatrixError("design matrix is rank deficient for adjustment set " + adjust.to_string());

    const Eigen::VectorXd coef = qr.solve(y);
    const double rss = (y - design * coef).squaredNorm();
    const double sigma2 = rss / static_cast<double>(n - p);

    // (X'X)^{-1} = P R^{-1} R^{-T} P^T; the exposure is column 1 of X.
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::Index pos = 0;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index t = 0; t < p; ++t)
        if (perm(t) == 1) pos = t;
    const double var = sigma2 * r_inv.row(pos).squaredNorm();
    return EffectEstimate{coef(1), std::sqrt(std::max(var, 0.0)), adjust};
}

}  // namespace resci::stats
