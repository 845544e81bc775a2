#include "resci/discovery/ci_test.hpp"

#include <cmath>
#include <stdexcept>

#include "resci/graph/algorithms.hpp"
#include "resci/stats/normal.hpp"

namespace resci::discovery {

namespace {
// Dense storage covers pair x subset for up to this many variables.
constexpr int kDenseMaxNodes = 11;
}  // namespace

CiOutcome DSeparationTest::test(int i, int j, NodeSet s) {
    return {graph::d_separated(dag_, i, j, s) ? CiDecision::independent : CiDecision::dependent, 0.0};
}

FisherZTable::FisherZTable(stats::GaussianSuffStats stats, bool half_factor)
    : stats_(std::move(stats)), half_factor_(half_factor) {
    const int d = stats_.num_variables();
    if (d > kMaxNodes) throw std::invalid_argument("too many variables");
    dense_ = d <= kDenseMaxNodes;
    if (dense_) dense_entries_.resize(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) << d);
}

FisherZTable::Entry& FisherZTable::slot(int i, int j, NodeSet s) {
    if (dense_) {
        const auto d = static_cast<std::size_t>(stats_.num_variables());
        const auto lo = static_cast<std::size_t>(std::min(i, j));
        const auto hi = static_cast<std::size_t>(std::max(i, j));
        return dense_entries_[((lo * d + hi) << d) | static_cast<std::size_t>(s.mask())];
    }
    return sparse_entries_[Key{pair_key(i, j), s.mask()}];
}

const std::optional<stats::TestStatistic>& FisherZTable::get(int i, int j, NodeSet s) {
    const int d = num_nodes();
    if (i < 0 || j < 0 || i >= d || j >= d || i == j) throw std::out_of_range("invalid test pair");
    if (s.contains(i) || s.contains(j) || !s.is_subset_of(NodeSet::first(d))) {
        throw std::invalid_argument("invalid conditioning set " + s.to_string());
    }
    Entry& e = slot(i, j, s);
    if (!e.filled) {
        // Compute with (lo, hi) so both orders see bit-identical values.
        e.value = stats::test_statistic(stats_, std::min(i, j), std::max(i, j), s, half_factor_);
        e.filled = true;
        if (e.value && e.value->clamped) clamped_.insert({pair_key(i, j), s.mask()});
    }
    return e.value;
}

FisherZTest::FisherZTest(FisherZTable& table, double alpha) : table_(&table) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
    threshold_ = stats::upper_quantile(alpha / 2.0);
}

FisherZTest FisherZTest::with_threshold(FisherZTable& table, double threshold) { return FisherZTest(table, threshold, 0); }

CiOutcome FisherZTest::test(int i, int j, NodeSet s) {
    const auto& stat = table_->get(i, j, s);
    if (!stat) return {CiDecision::cannot_test, 0.0};
    return {std::abs(stat->z) > threshold_ ? CiDecision::dependent : CiDecision::independent, stat->z};
}

ResampledFisherZTest::ResampledFisherZTest(FisherZTable& table, double threshold, std::uint64_t master_seed,
                                           std::uint64_t run, std::optional<double> truncation, double noise_scale)
    : table_(&table),
      threshold_(threshold),
      master_seed_(master_seed),
      run_(run),
      truncation_(truncation),
      noise_scale_(noise_scale) {}

stats::DrawKey ResampledFisherZTest::key_for(int i, int j, NodeSet s) const {
    return stats::DrawKey{master_seed_, run_, pair_key(i, j), s.mask()};
}

CiOutcome ResampledFisherZTest::test(int i, int j, NodeSet s) {
    const auto& stat = table_->get(i, j, s);
    if (!stat) return {CiDecision::cannot_test, 0.0};
    double z = stat->z;
    if (noise_scale_ == 1.0) {
        z = stats::resample_statistic(stat->z, key_for(i, j, s), truncation_);
    } else if (noise_scale_ != 0.0) {
        z += noise_scale_ * (stats::resample_statistic(stat->z, key_for(i, j, s), truncation_) - stat->z);
    }
    return {std::abs(z) > threshold_ ? CiDecision::dependent : CiDecision::independent, z};
}

}  // namespace resci::discovery
