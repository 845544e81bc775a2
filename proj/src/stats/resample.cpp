#include "resci/stats/resample.hpp"

#include <stdexcept>

#include "resci/stats/normal.hpp"

namespace resci::stats {

std::uint64_t hash_key(const DrawKey& key) {
    std::uint64_t h = mix64(key.master_seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ key.run);
    h = mix64(h ^ key.pair);
    return mix64(h ^ key.subset);
}

double uniform_draw(const DrawKey& key) {
    const std::uint64_t top = hash_key(key) >> 11;
    return (static_cast<double>(top) + 0.5) * 0x1.0p-53;
}

double standard_normal_draw(const DrawKey& key) { return normal_quantile(uniform_draw(key)); }

double resample_statistic(double z_hat, const DrawKey& key, std::optional<double> truncation) {
    if (!truncation) return z_hat + standard_normal_draw(key);
    if (!(*truncation > 0.0)) throw std::invalid_argument("truncation half-width must be positive");
    const double lo = normal_cdf(-*truncation);
    const double hi = normal_cdf(*truncation);
    return z_hat + normal_quantile(lo + uniform_draw(key) * (hi - lo));
}

}  // namespace resci::stats
