#include "resci/discovery/resample.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <stdexcept>

#include "resci/parallel.hpp"
#include "resci/stats/normal.hpp"

namespace resci::discovery {

long compute_L(int d, int max_adj) {
    if (d < 2) throw std::invalid_argument("L needs d >= 2");
    if (max_adj < 0) throw std::invalid_argument("L needs max_adj >= 0");
    return static_cast<long>(d) * (d - 1) / 2 * (max_adj + 1);
}

double compute_tau(double c_star, int n, int M, long L) {
    if (!(c_star > 0.0) || n < 2 || M < 1 || L < 1) throw std::invalid_argument("compute_tau: arguments out of range");
    const double log_base = std::log(std::log(static_cast<double>(n))) - std::log(static_cast<double>(M));
    return c_star * std::exp(log_base / static_cast<double>(L));
}

double compute_err_n(int n, int M, double nu, long L) {
    if (n < 2 || M < 1 || L < 1 || !(nu > 0.0 && nu < 0.5)) throw std::invalid_argument("compute_err_n: arguments out of range");
    const double Ld = static_cast<double>(L);
    const double z = stats::upper_quantile(nu / (2.0 * Ld));
    const double log_c = -0.5 * Ld * std::log(2.0 * std::numbers::pi) - 0.5 * Ld * z * z;
    const double log_inner = std::log(2.0 * std::log(static_cast<double>(n))) - log_c - std::log(static_cast<double>(M));
    return 0.5 * std::exp(log_inner / Ld);
}

void ResampleConfig::validate() const {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (!(c_star > 0.0)) throw std::invalid_argument("c_star must be positive");
    if (!(nu > 0.0 && nu < 0.5)) throw std::invalid_argument("nu must be in (0, 1/2)");
    if (max_adj < 0) throw std::invalid_argument("max_adj must be >= 0");
    if (max_cond_size && *max_cond_size < 0) throw std::invalid_argument("max_cond_size must be >= 0");
    if (truncation && !(*truncation > 0.0)) throw std::invalid_argument("truncation must be positive");
    if (!(noise_scale >= 0.0)) throw std::invalid_argument("noise_scale must be >= 0");
}

double resample_threshold(const ResampleConfig& cfg, int d, int n) {
    const long L = compute_L(d, cfg.max_adj);
    return compute_tau(cfg.c_star, n, cfg.M, L) * stats::upper_quantile(cfg.nu / (2.0 * static_cast<double>(L)));
}

namespace {

ResampleBatch empty_batch(const ResampleConfig& cfg, int d, int n) {
    cfg.validate();
    ResampleBatch batch;
    batch.master_seed = cfg.master_seed;
    batch.L = compute_L(d, cfg.max_adj);
    batch.tau = compute_tau(cfg.c_star, n, cfg.M, batch.L);
    batch.threshold = resample_threshold(cfg, d, n);
    batch.runs.resize(static_cast<std::size_t>(cfg.M));
    for (int m = 0; m < cfg.M; ++m) batch.run_keys.push_back(static_cast<std::uint64_t>(m));
    return batch;
}

DiscoveryResult one_run(FisherZTable& table, const ResampleConfig& cfg, double threshold, std::uint64_t run,
                        const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk) {
    ResampledFisherZTest test(table, threshold, cfg.master_seed, run, cfg.truncation, cfg.noise_scale);
    PcOptions options;
    options.max_cond_size = cfg.effective_max_cond_size();
    options.orient_mode = cfg.orient_mode;
    return pc_stable_tiered(test, tiers, bk, options);
}

}  // namespace

ResampleBatch resampled_pc_runs(FisherZTable& table, const ResampleConfig& cfg, const graph::TierOrder& tiers,
                                const graph::BackgroundKnowledge& bk) {
    ResampleBatch batch = empty_batch(cfg, table.num_nodes(), table.sample_size());
    for (int m = 0; m < cfg.M; ++m) {
        batch.runs[static_cast<std::size_t>(m)] = one_run(table, cfg, batch.threshold, batch.run_keys[static_cast<std::size_t>(m)], tiers, bk);
    }
    batch.clamp_count = table.clamp_count();
    return batch;
}

ResampleBatch resampled_pc_runs(const stats::GaussianSuffStats& stats, const ResampleConfig& cfg,
                                const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk, int jobs) {
    ResampleBatch batch = empty_batch(cfg, stats.num_variables(), stats.n);
    jobs = std::clamp(jobs, 1, cfg.M);
    std::vector<std::unique_ptr<FisherZTable>> tables;
    for (int w = 0; w < jobs; ++w) tables.push_back(std::make_unique<FisherZTable>(stats, cfg.half_factor));
    parallel_for(cfg.M, jobs, [&](int m, int worker) {
        batch.runs[static_cast<std::size_t>(m)] =
            one_run(*tables[static_cast<std::size_t>(worker)], cfg, batch.threshold, batch.run_keys[static_cast<std::size_t>(m)], tiers, bk);
    });
    std::set<std::pair<std::uint64_t, std::uint64_t>> clamped;
    for (const auto& t : tables) clamped.insert(t->clamped_keys().begin(), t->clamped_keys().end());
    batch.clamp_count = static_cast<int>(clamped.size());
    return batch;
}

}  // namespace resci::discovery
