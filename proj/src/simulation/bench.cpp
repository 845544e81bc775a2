#include "resci/simulation/bench.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "resci/discovery/resample.hpp"
#include "resci/parallel.hpp"
#include "resci/simulation/sem.hpp"
#include "resci/stats/gaussian.hpp"
#include "resci/stats/resample.hpp"

namespace resci::simulation {

void ScenarioConfig::validate() const {
    if (d < 2 || d > kMaxNodes) throw std::invalid_argument("d out of range");
    if (!(expected_neighbors > 0.0 && expected_neighbors <= d - 1)) throw std::invalid_argument("expected_neighbors must be in (0, d-1]");
    if (n < 4) throw std::invalid_argument("n must be >= 4");
    if (Ms.empty()) throw std::invalid_argument("at least one M is needed");
    for (int m : Ms)
        if (m < 1) throw std::invalid_argument("M must be >= 1");
    if (grid.empty()) throw std::invalid_argument("c* grid is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0)) throw std::invalid_argument("c* must be positive");
        if (k > 0 && !(grid[k] > grid[k - 1])) throw std::invalid_argument("c* grid must be strictly increasing");
    }
    inference::alpha1_for(gamma, nu);
    if (max_adj < 0) throw std::invalid_argument("max_adj must be >= 0");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (truncation && !(*truncation > 0.0)) throw std::invalid_argument("truncation must be positive");
    if (exposure < 0 || exposure >= d || outcome < 0 || outcome >= d || exposure == outcome)
        throw std::invalid_argument("exposure and outcome must be distinct nodes");
    if (!tiers.empty() && static_cast<int>(tiers.size()) != d) throw std::invalid_argument("tier vector length must equal d");
    const auto order = tier_order();
    if (order.tier(exposure) > order.tier(outcome)) throw std::invalid_argument("exposure tier must not exceed outcome tier");
    for (double a : naive_alphas)
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("naive alpha must be in (0, 1)");
}

graph::TierOrder ScenarioConfig::tier_order() const {
    return tiers.empty() ? graph::TierOrder::trivial(d) : graph::TierOrder(tiers);
}

double BenchRecord::coverage_se() const {
    if (with_interval == 0) return 0.0;
    return std::sqrt(coverage * (1.0 - coverage) / with_interval);
}

double BenchRecord::length_se() const {
    return with_interval > 0 ? length_sd / std::sqrt(static_cast<double>(with_interval)) : 0.0;
}

namespace {

struct Slot {
    std::string method;
    std::optional<double> c_star;
    int M = 0;
};

std::string alpha_label(double alpha) {
    std::ostringstream s;
    s << "naive(" << alpha << ")";
    return s.str();
}

std::vector<Slot> layout(const ScenarioConfig& cfg) {
    std::vector<Slot> slots;
    for (int m : cfg.Ms) {
        for (double c : cfg.grid) slots.push_back({"resample", c, m});
        if (cfg.heuristic) slots.push_back({"resample_heuristic", std::nullopt, m});
    }
    for (double a : cfg.naive_alphas) slots.push_back({alpha_label(a), std::nullopt, 0});
    if (cfg.oracle) slots.push_back({"oracle", std::nullopt, 0});
    return slots;
}

MethodOutcome outcome_of(const std::optional<inference::IntervalUnion>& ci, double truth) {
    MethodOutcome out;
    if (!ci) return out;
    out.has_interval = true;
    out.covered = ci->contains(truth);
    out.length_union = ci->total_length();
    out.length_hull = ci->hull_length();
    return out;
}

}  // namespace

ReplicateResult run_replicate(const ScenarioConfig& cfg, int index) {
    const auto rep = static_cast<std::uint64_t>(index);
    Rng rng(stats::derive_seed(cfg.master_seed, rep, kDataSalt));
    const graph::Dag dag = random_dag(cfg.d, cfg.expected_neighbors, rng);
    const WeightedDag wd = draw_and_scale_weights(dag, rng);
    const stats::DataMatrix x = sample_sem(wd, cfg.n, rng);

    ReplicateResult result;
    result.truth = true_effect(wd, cfg.exposure, cfg.outcome);

    const graph::TierOrder tiers = cfg.tier_order();
    const graph::BackgroundKnowledge bk;
    discovery::FisherZTable table(stats::correlation_from_data(x), cfg.half_factor);
    inference::EffectEstimator estimator(x, cfg.exposure, cfg.outcome);

    inference::EffectQuery query;
    query.exposure = cfg.exposure;
    query.outcome = cfg.outcome;
    query.gamma = cfg.gamma;
    query.level = cfg.level;

    discovery::ResampleConfig rc;
    rc.nu = cfg.nu;
    rc.max_adj = cfg.max_adj;
    rc.max_cond_size = cfg.max_cond_size;
    rc.truncation = cfg.truncation;
    rc.half_factor = cfg.half_factor;
    rc.orient_mode = cfg.orient_mode;
    rc.master_seed = stats::derive_seed(cfg.master_seed, rep, kResampleSalt);

    for (int m : cfg.Ms) {
        rc.M = m;
        std::vector<inference::KeptRow> rows;
        std::vector<MethodOutcome> per_c;
        for (double c : cfg.grid) {
            rc.c_star = c;
            const auto batch = discovery::resampled_pc_runs(table, rc, tiers, bk);
            const auto report = inference::aggregate_batch(batch, rc, estimator, query, tiers, bk);
            MethodOutcome mo = outcome_of(report.ci, result.truth);
            mo.kept_fraction = report.kept_fraction();
            mo.c_star = c;
            rows.push_back({c, static_cast<int>(report.kept.size()), m});
            per_c.push_back(mo);
            result.methods.push_back(mo);
        }
        if (cfg.heuristic) {
            const auto chosen = inference::choose_c_star(rows);
            result.methods.push_back(chosen ? per_c[*chosen] : MethodOutcome{});
        }
    }

    inference::NaiveOptions naive;
    naive.level = cfg.level;
    naive.max_cond_size = cfg.max_cond_size.value_or(cfg.max_adj);
    naive.orient_mode = cfg.orient_mode;
    for (double a : cfg.naive_alphas) {
        const auto res = inference::naive_ci(estimator, table, a, cfg.gamma, tiers, bk, naive);
        result.methods.push_back(outcome_of(res.ci, result.truth));
    }
    if (cfg.oracle) {
        const auto iv = inference::oracle_ci(x, dag, cfg.gamma, cfg.exposure, cfg.outcome);
        result.methods.push_back(outcome_of(inference::IntervalUnion({iv}), result.truth));
    }
    return result;
}

std::vector<BenchRecord> summarize(const ScenarioConfig& cfg, const std::vector<ReplicateResult>& results) {
    const auto slots = layout(cfg);
    std::vector<BenchRecord> records;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        BenchRecord r;
        r.scenario = cfg.id;
        r.method = slots[s].method;
        r.c_star = slots[s].c_star;
        r.M = slots[s].M;
        r.n = cfg.n;
        r.replicates = static_cast<int>(results.size());
        r.seed = cfg.master_seed;
        double sum_union = 0.0, sum_sq = 0.0, sum_hull = 0.0, sum_kept = 0.0, sum_c = 0.0;
        int with_c = 0;
        for (const auto& rep : results) {
            if (rep.methods.size() != slots.size()) throw std::invalid_argument("replicate result has the wrong shape");
            const auto& mo = rep.methods[s];
            sum_kept += mo.kept_fraction;
            if (mo.c_star) {
                sum_c += *mo.c_star;
                ++with_c;
            }
            if (!mo.has_interval) continue;
            ++r.with_interval;
            if (mo.covered) ++r.covered;
            sum_union += mo.length_union;
            sum_sq += mo.length_union * mo.length_union;
            sum_hull += mo.length_hull;
        }
        const double reps = static_cast<double>(results.size());
        if (r.with_interval > 0) {
            const double k = r.with_interval;
            r.coverage = r.covered / k;
            r.avg_length_union = sum_union / k;
            r.avg_length_hull = sum_hull / k;
            if (r.with_interval > 1) r.length_sd = std::sqrt(std::max(0.0, (sum_sq - k * r.avg_length_union * r.avg_length_union) / (k - 1)));
        }
        r.kept_pct = reps > 0 ? 100.0 * sum_kept / reps : 0.0;
        r.no_interval_pct = reps > 0 ? 100.0 * (reps - r.with_interval) / reps : 0.0;
        if (slots[s].method == "resample_heuristic" && with_c > 0) r.mean_chosen_c_star = sum_c / with_c;
        records.push_back(r);
    }
    return records;
}

std::vector<BenchRecord> run_scenario(const ScenarioConfig& cfg, int jobs) {
    cfg.validate();
    std::vector<ReplicateResult> results(static_cast<std::size_t>(cfg.replicates));
    parallel_for(cfg.replicates, jobs, [&](int index, int) { results[static_cast<std::size_t>(index)] = run_replicate(cfg, index); });
    return summarize(cfg, results);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records, bool header) {
    if (header) out << kBenchCsvHeader << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : records) {
        out << r.scenario << ',' << r.method << ',';
        if (r.c_star) out << *r.c_star;
        out << ',' << r.M << ',' << r.n << ',' << r.coverage << ',' << r.avg_length_union << ',' << r.avg_length_hull << ','
            << r.kept_pct << ',' << r.no_interval_pct << ',' << r.replicates << ',' << r.seed << '\n';
    }
    out.precision(old_precision);
}

namespace {

template <typename T>
T parse_field(const std::string& field, int row, int column) {
    T value{};
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) throw stats::DataParseError(row, column, "cannot parse '" + field + "'");
    return value;
}

}  // namespace

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
    std::string line;
    int row = 0;
    bool header = false;
    while (!header && std::getline(in, line)) {
        ++row;
        if (line.empty() || line.front() == '#') continue;
        if (line != kBenchCsvHeader) throw stats::DataParseError(row, 0, "unexpected bench CSV header");
        header = true;
    }
    if (!header) throw stats::DataParseError(row, 0, "missing bench CSV header");
    std::vector<BenchRecord> out;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 12) throw stats::DataParseError(row, 0, "expected 12 fields");
        BenchRecord r;
        r.scenario = f[0];
        r.method = f[1];
        if (!f[2].empty()) r.c_star = parse_field<double>(f[2], row, 3);
        r.M = parse_field<int>(f[3], row, 4);
        r.n = parse_field<int>(f[4], row, 5);
        r.coverage = parse_field<double>(f[5], row, 6);
        r.avg_length_union = parse_field<double>(f[6], row, 7);
        r.avg_length_hull = parse_field<double>(f[7], row, 8);
        r.kept_pct = parse_field<double>(f[8], row, 9);
        r.no_interval_pct = parse_field<double>(f[9], row, 10);
        r.replicates = parse_field<int>(f[10], row, 11);
        r.seed = parse_field<std::uint64_t>(f[11], row, 12);
        out.push_back(r);
    }
    return out;
}

std::vector<double> c_star_grid() { return {0.006, 0.007, 0.008, 0.009, 0.01, 0.02, 0.03, 0.04}; }

ScenarioConfig dense_scenario() {
    ScenarioConfig cfg;
    cfg.id = "dense";
    cfg.d = 10;
    cfg.expected_neighbors = 7.0;
    cfg.n = 500;
    cfg.Ms = {50};
    cfg.grid = {0.01};
    cfg.nu = 0.025;
    cfg.gamma = 0.05;
    cfg.max_adj = 7;
    cfg.tiers = {1, 1, 1, 2, 2, 2, 2, 2, 3, 3};
    cfg.exposure = 5;
    cfg.outcome = 9;
    cfg.replicates = 500;
    return cfg;
}

std::vector<ScenarioConfig> figure_preset(int figure) {
    ScenarioConfig base = dense_scenario();
    switch (figure) {
        case 1:
        case 2: {
            base.id = figure == 1 ? "fig1" : "fig2";
            base.Ms = {figure == 1 ? 50 : 100};
            base.grid = c_star_grid();
            base.heuristic = true;
            return {base};
        }
        case 3: {
            std::vector<ScenarioConfig> out;
            for (int n : {250, 500, 1000, 2000}) {
                ScenarioConfig cfg = base;
                cfg.id = "fig3_n" + std::to_string(n);
                cfg.n = n;
                cfg.Ms = n == 500 ? std::vector<int>{10, 25, 50, 100} : std::vector<int>{50};
                out.push_back(cfg);
            }
            return out;
        }
        case 4: {
            base.id = "sparse";
            base.expected_neighbors = 4.0;
            base.grid = c_star_grid();
            base.heuristic = true;
            return {base};
        }
        case 5: {
            ScenarioConfig plain = base;
            plain.id = "fig1_plain";
            plain.grid = c_star_grid();
            ScenarioConfig truncated = plain;
            truncated.id = "fig1_truncated";
            truncated.truncation = 1.5;
            return {plain, truncated};
        }
        default:
            throw std::invalid_argument("unknown figure preset " + std::to_string(figure));
    }
}

}  // namespace resci::simulation
