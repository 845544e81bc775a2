#pragma once

namespace resci::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile for p in (0, 1); throws std::domain_error otherwise.
double normal_quantile(double p);

/// Upper-tail critical value z_a, i.e. normal_quantile(1 - a).
/// Computed without forming 1 - a, so tiny tail areas keep full precision.
double upper_quantile(double tail_area);

}  // namespace resci::stats
