#include "resci/stats/normal.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace resci::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile needs p in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double upper_quantile(double tail_area) {
    if (!(tail_area > 0.0 && tail_area < 1.0)) throw std::domain_error("upper_quantile needs a tail area in (0, 1)");
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * tail_area);
}

}  // namespace resci::stats
