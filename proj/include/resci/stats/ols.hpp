#pragma once

#include "resci/node_set.hpp"
#include "resci/stats/data.hpp"

namespace resci::stats {

/// Regression coefficient of the exposure and its standard error.
struct EffectEstimate {
    double beta = 0.0;
    double se = 0.0;
    NodeSet adjust;

    friend bool operator==(const EffectEstimate&, const EffectEstimate&) = default;
};

/// Relative pivot tolerance of the rank-revealing QR.
inline constexpr double kOlsRankTolerance = 1e-10;

/// OLS of outcome on intercept + exposure + adjust; returns the exposure
/// coefficient and its homoscedastic standard error. Throws
/// std::invalid_argument when exposure or outcome is in `adjust`, and
/// SingularMatrixError when the design is rank deficient or leaves no
/// residual degrees of freedom.
EffectEstimate ols_effect(const DataMatrix& x, int exposure, int outcome, NodeSet adjust);

}  // namespace resci::stats
