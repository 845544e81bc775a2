#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "resci/discovery/pc.hpp"

namespace resci::discovery {

/// Upper bound on the number of tests in one PC run:
/// d(d-1)/2 * (max_adj + 1).
long compute_L(int d, int max_adj);

/// Shrinkage factor tau(M) = c* (ln n / M)^(1/L), evaluated in the log domain.
double compute_tau(double c_star, int n, int M, long L);

/// Diagnostic error bound (1/2) (2 ln n / (c(nu) M))^(1/L) with
/// c(nu) = (2 pi)^(-L/2) exp(-(L/2) z^2_{nu/2L}). c(nu) underflows for
/// realistic L, so everything stays in the log domain.
double compute_err_n(int n, int M, double nu, long L);

struct ResampleConfig {
    int M = 50;
    double c_star = 0.01;
    double nu = 0.025;
    /// Assumed maximum adjacency; enters L.
    int max_adj = 7;
    /// Defaults to max_adj.
    std::optional<int> max_cond_size;
    /// Half-width (in standard deviations) of truncated resampling.
    std::optional<double> truncation;
    std::uint64_t master_seed = 0;
    bool half_factor = true;
    graph::OrientMode orient_mode = graph::OrientMode::standard;
    /// Scales the injected noise; 0 gives noiseless runs for testing.
    double noise_scale = 1.0;

    /// Throws std::invalid_argument when out of range.
    void validate() const;
    int effective_max_cond_size() const { return max_cond_size.value_or(max_adj); }
};

struct ResampleBatch {
    std::vector<DiscoveryResult> runs;
    /// Run index m used in each run's draw keys (together with the master seed).
    std::vector<std::uint64_t> run_keys;
    std::uint64_t master_seed = 0;
    long L = 0;
    double tau = 0.0;
    /// tau * z_{nu / 2L}.
    double threshold = 0.0;
    /// Distinct statistics whose partial correlation was clamped.
    int clamp_count = 0;
};

/// Rejection threshold tau(M) * z_{nu/2L} for d variables and n samples.
double resample_threshold(const ResampleConfig& cfg, int d, int n);

/// M resampled PC runs sharing `table`. Single-threaded.
ResampleBatch resampled_pc_runs(FisherZTable& table, const ResampleConfig& cfg, const graph::TierOrder& tiers,
                                const graph::BackgroundKnowledge& bk);

/// M resampled PC runs on `jobs` threads, each with its own statistic table.
/// Output is identical for every jobs value.
ResampleBatch resampled_pc_runs(const stats::GaussianSuffStats& stats, const ResampleConfig& cfg,
                                const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk, int jobs = 1);

}  // namespace resci::discovery
