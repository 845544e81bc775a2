#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "plot.hpp"
#include "resci/discovery/resample.hpp"
#include "resci/graph/graph_io.hpp"
#include "resci/inference/effect.hpp"
#include "resci/inference/report_json.hpp"
#include "resci/stats/gaussian.hpp"
#include "resci/stats/normal.hpp"

namespace resci::cli {

using nlohmann::json;

namespace {

/// Unreadable or unusable input data (exit code 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int resolve(const std::string& name, const std::vector<std::string>& names) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("unknown variable '" + name + "'");
    return static_cast<int>(it - names.begin());
}

std::pair<int, int> parse_pair(std::string_view text, std::string_view arrow, const std::vector<std::string>& names) {
    const auto pos = text.find(arrow);
    if (pos == std::string_view::npos)
        throw ConfigError("expected 'A" + std::string(arrow) + "B', got '" + std::string(text) + "'");
    const int a = resolve(trim(text.substr(0, pos)), names);
    const int b = resolve(trim(text.substr(pos + arrow.size())), names);
    if (a == b) throw ConfigError("'" + std::string(text) + "' names the same variable twice");
    return {a, b};
}

graph::ValidityLevel parse_level(const std::string& s) {
    if (s == "strict") return graph::ValidityLevel::strict;
    if (s == "basic") return graph::ValidityLevel::basic;
    throw ConfigError("validity level must be basic or strict, got '" + s + "'");
}

std::string level_name(graph::ValidityLevel l) { return l == graph::ValidityLevel::strict ? "strict" : "basic"; }

graph::OrientMode parse_orient(const std::string& s) {
    if (s == "standard") return graph::OrientMode::standard;
    if (s == "majority") return graph::OrientMode::majority;
    throw ConfigError("orientation must be standard or majority, got '" + s + "'");
}

std::string orient_name(graph::OrientMode m) { return m == graph::OrientMode::standard ? "standard" : "majority"; }

std::vector<inference::AdjustPolicy> parse_policies(const std::string& s) {
    if (s == "both") return {inference::AdjustPolicy::parents_only, inference::AdjustPolicy::parents_plus_tier_block};
    if (auto p = inference::parse_adjust_policy(s)) return {*p};
    throw ConfigError("policy must be parents, tier_block or both, got '" + s + "'");
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // A bench CSV carries its config on the first line.
    constexpr std::string_view kPrefix = "# config: ";
    if (text.rfind(kPrefix, 0) == 0) text = text.substr(kPrefix.size(), text.find('\n') - kPrefix.size());
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// Accepts a bare config object or any report carrying one under "config".
json unwrap_config(json j) {
    if (j.is_object() && j.contains("config") && j["config"].is_object()) return j["config"];
    return j;
}

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
    if (j.at(key).is_null()) return std::nullopt;
    return get_as<T>(j, key);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("unknown config key '" + key + "'");
    }
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

stats::DataMatrix load_data(const std::string& path) {
    if (path.empty()) throw ConfigError("no input data given (--data)");
    try {
        return stats::read_csv_file(path);
    } catch (const stats::DataParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

stats::GaussianSuffStats sufficient_stats(const stats::DataMatrix& x) {
    try {
        return stats::correlation_from_data(x);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text(path, text);
    }
}

// Scans for --config before binding so its values become the flag defaults.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) return args[k + 1];
        if (args[k].rfind("--config=", 0) == 0) return args[k].substr(9);
    }
    return std::nullopt;
}

struct Problem {
    stats::DataMatrix data;
    graph::TierOrder tiers;
    graph::BackgroundKnowledge bk;
    discovery::ResampleConfig resample;
    graph::ValidityLevel level;
};

Problem build_problem(const RunConfig& cfg) {
    Problem p;
    p.data = load_data(cfg.data);
    const auto& names = p.data.names();
    const int d = p.data.num_variables();
    p.tiers = cfg.tiers.empty() ? graph::TierOrder::trivial(d) : graph::TierOrder(parse_tier_spec(cfg.tiers, names));
    for (const auto& f : cfg.forbid) p.bk.forbidden_edges.insert(parse_forbidden(f, names));
    for (const auto& r : cfg.require) {
        const auto [a, b] = parse_required(r, names);
        p.bk.add_required_adjacency(a, b);
    }
    if (!cfg.scope.empty()) {
        NodeSet s;
        for (const auto& name : cfg.scope) s.insert(resolve(name, names));
        p.bk.validity_scope = s;
    }
    p.level = parse_level(cfg.level);
    auto& rc = p.resample;
    rc.M = cfg.M;
    rc.c_star = cfg.c_star;
    rc.nu = cfg.nu;
    rc.max_adj = cfg.max_adj;
    rc.max_cond_size = cfg.max_cond_size;
    rc.truncation = cfg.truncation;
    rc.master_seed = cfg.seed.value_or(0);
    rc.half_factor = cfg.half_factor;
    rc.orient_mode = parse_orient(cfg.orient);
    try {
        rc.validate();
        p.bk.validate(d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.cap < 1) throw ConfigError("enumeration cap must be positive");
    return p;
}

json edges_json(const graph::MixedGraph& g, const std::vector<std::string>& names) {
    json out = json::array();
    for (const auto& e : g.edges()) {
        const char* arrow = e.kind == graph::EdgeKind::directed ? "->" : e.kind == graph::EdgeKind::undirected ? "--" : "<->";
        out.push_back(names[static_cast<std::size_t>(e.a)] + " " + arrow + " " + names[static_cast<std::size_t>(e.b)]);
    }
    return out;
}

std::string graph_file(const graph::MixedGraph& g, const std::vector<std::string>& names) {
    std::string header = "# variables:";
    for (const auto& n : names) header += " " + n;
    return header + "\n" + graph::to_edge_list(g);
}

json run_json(const discovery::DiscoveryResult& r, graph::Invalidity why, const std::vector<std::string>& names) {
    const auto& f = r.diagnostics.orientation;
    return {{"valid", why == graph::Invalidity::none},
            {"invalidity", std::string(graph::to_string(why))},
            {"tests", r.diagnostics.tests_performed},
            {"cannot_test", r.diagnostics.cannot_test},
            {"max_level", r.diagnostics.max_level},
            {"bidirected_conflicts", f.bidirected_conflicts},
            {"background_conflicts", f.background_conflicts},
            {"ambiguous_triples", f.ambiguous_triples},
            {"edges", edges_json(r.graph, names)}};
}

// ---------------------------------------------------------------- discover

int cmd_discover(const RunConfig& cfg, const std::string& out_dir, bool dot, int jobs, std::ostream& out) {
    const Problem p = build_problem(cfg);
    const auto& names = p.data.names();
    const auto stats = sufficient_stats(p.data);

    std::vector<discovery::DiscoveryResult> runs;
    json report;
    report["config"] = to_json(cfg);
    report["seed"] = p.resample.master_seed;
    report["variables"] = names;
    if (cfg.alpha) {
        if (!(*cfg.alpha > 0.0 && *cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
        discovery::FisherZTable table(stats, cfg.half_factor);
        discovery::FisherZTest test(table, *cfg.alpha);
        runs.push_back(discovery::pc_stable_tiered(
            test, p.tiers, p.bk, {p.resample.effective_max_cond_size(), p.resample.orient_mode}));
        report["mode"] = "classical";
        report["threshold"] = test.threshold();
    } else {
        auto batch = discovery::resampled_pc_runs(stats, p.resample, p.tiers, p.bk, jobs);
        report["mode"] = "resampled";
        report["L"] = batch.L;
        report["tau"] = batch.tau;
        report["threshold"] = batch.threshold;
        report["clamp_count"] = batch.clamp_count;
        runs = std::move(batch.runs);
    }

    json run_list = json::array();
    std::vector<int> kept;
    for (std::size_t m = 0; m < runs.size(); ++m) {
        const auto why = graph::check_cpdag(runs[m].graph, p.level, p.bk, p.tiers);
        if (why == graph::Invalidity::none) kept.push_back(static_cast<int>(m));
        auto rj = run_json(runs[m], why, names);
        rj["index"] = m;
        run_list.push_back(std::move(rj));
    }
    report["kept_count"] = kept.size();
    report["kept_indices"] = kept;
    report["runs"] = run_list;

    if (out_dir.empty()) {
        out << report.dump(2) << '\n';
        return kOk;
    }
    std::filesystem::create_directories(out_dir);
    for (std::size_t m = 0; m < runs.size(); ++m) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "graph_%03zu", m);
        const auto base = std::filesystem::path(out_dir) / stem;
        write_text(base.string() + ".txt", graph_file(runs[m].graph, names));
        if (dot) write_text(base.string() + ".dot", graph::to_dot(runs[m].graph, names));
    }
    write_text((std::filesystem::path(out_dir) / "report.json").string(), report.dump(2) + "\n");
    return kOk;
}

// ---------------------------------------------------------------- effect

int cmd_effect(const RunConfig& cfg, const std::string& out_path, int jobs, std::ostream& out, std::ostream& err) {
    Problem p = build_problem(cfg);
    const auto& names = p.data.names();
    if (cfg.exposure.empty() || cfg.outcome.empty()) throw ConfigError("effect needs --exposure and --outcome");
    const int exposure = resolve(cfg.exposure, names);
    const int outcome = resolve(cfg.outcome, names);
    if (exposure == outcome) throw ConfigError("exposure and outcome must differ");
    if (p.tiers.tier(exposure) > p.tiers.tier(outcome))
        throw ConfigError("exposure sits in a later tier than the outcome");
    const auto policies = parse_policies(cfg.policy);
    double alpha1 = 0.0;
    try {
        alpha1 = inference::alpha1_for(cfg.gamma, cfg.nu);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto stats = sufficient_stats(p.data);

    json report;
    report["config"] = to_json(cfg);
    report["seed"] = p.resample.master_seed;
    report["variables"] = names;
    report["exposure"] = cfg.exposure;
    report["outcome"] = cfg.outcome;
    report["gamma"] = cfg.gamma;
    report["nu"] = cfg.nu;
    report["alpha1"] = alpha1;

    discovery::ResampleBatch batch;
    if (!cfg.grid.empty()) {
        inference::HeuristicResult h;
        try {
            h = inference::c_star_heuristic(stats, cfg.grid, p.resample, p.tiers, p.bk, p.level, jobs);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        report["heuristic"] = {{"table", inference::to_json(h.table)}, {"chosen_c_star", optional_json(h.chosen_c_star())}};
        if (!h.chosen) {
            report["status"] = "no_valid_graphs";
            report["reports"] = json::object();
            emit(out_path, report.dump(2) + "\n", out);
            err << "no valid graphs at any c* on the grid\n";
            return kNoValidGraphs;
        }
        p.resample.c_star = cfg.grid[*h.chosen];
        batch = std::move(h.batches[*h.chosen]);
    } else {
        batch = discovery::resampled_pc_runs(stats, p.resample, p.tiers, p.bk, jobs);
    }

    json reports = json::object();
    bool all_ok = true;
    for (auto policy : policies) {
        inference::EffectEstimator estimator(p.data, exposure, outcome);
        inference::EffectQuery q{exposure, outcome, cfg.gamma, policy, p.level, cfg.cap};
        const auto r = inference::aggregate_batch(batch, p.resample, estimator, q, p.tiers, p.bk);
        all_ok = all_ok && r.ci.has_value();
        reports[std::string(inference::to_string(policy))] = inference::to_json(r, names);
    }
    report["reports"] = reports;
    if (!all_ok) {
        // The kept-percentage table tells the user which way to move c*.
        if (!report.contains("heuristic"))
            report["heuristic"] = {{"table", inference::to_json(std::vector<inference::KeptRow>{
                                                 {p.resample.c_star, 0, p.resample.M}})},
                                   {"chosen_c_star", nullptr}};
    }
    report["status"] = all_ok ? "ok" : "no_valid_graphs";
    emit(out_path, report.dump(2) + "\n", out);
    if (!all_ok) {
        err << "no valid graphs among " << p.resample.M << " resampled runs\n";
        return kNoValidGraphs;
    }
    return kOk;
}

// ---------------------------------------------------------------- bench

int cmd_bench(std::vector<simulation::ScenarioConfig> scenarios, const std::string& out_path,
              const std::string& svg_path, int jobs, std::ostream& out) {
    json echo = json::array();
    std::vector<simulation::BenchRecord> records;
    for (auto& s : scenarios) {
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scenario '" + s.id + "': " + e.what());
        }
        echo.push_back(to_json(s));
    }
    for (const auto& s : scenarios) {
        auto r = simulation::run_scenario(s, jobs);
        records.insert(records.end(), r.begin(), r.end());
    }
    std::ostringstream csv;
    csv << "# config: " << json{{"scenarios", echo}}.dump() << '\n';
    simulation::write_bench_csv(csv, records);
    emit(out_path, csv.str(), out);
    if (!svg_path.empty()) {
        const auto axis = choose_x_axis(records, "auto");
        write_text(svg_path, render_svg(plot_points(records, axis), scenarios.front().id));
    }
    return kOk;
}

// ---------------------------------------------------------------- plot-data

int cmd_plot(const std::string& in_path, const std::string& x, const std::string& out_path,
             const std::string& svg_path, std::ostream& out) {
    std::ifstream in(in_path);
    if (!in) throw DataError("cannot open " + in_path);
    const auto records = simulation::read_bench_csv(in);
    std::string axis;
    try {
        axis = choose_x_axis(records, x);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto points = plot_points(records, axis);
    std::ostringstream csv;
    write_plot_csv(csv, points);
    emit(out_path, csv.str(), out);
    if (!svg_path.empty()) write_text(svg_path, render_svg(points, in_path));
    return kOk;
}

void add_run_options(CLI::App& app, RunConfig& cfg, std::optional<int>& max_cond, std::optional<double>& trunc,
                     std::optional<std::uint64_t>& seed) {
    app.add_option("--config", "JSON config (flags override its values)");
    app.add_option("--data", cfg.data, "input CSV with a header row");
    app.add_option("--tiers", cfg.tiers, "tier spec, e.g. \"A,B:1;C:2\"");
    app.add_option("--forbid", cfg.forbid, "forbidden edge X->Y (repeatable)");
    app.add_option("--require", cfg.require, "required adjacency A--B (repeatable)");
    app.add_option("--scope", cfg.scope, "variables to which validity screening is restricted")->delimiter(',');
    app.add_option("--M", cfg.M, "number of resampled runs");
    app.add_option("--c-star", cfg.c_star, "shrinkage constant c*");
    app.add_option("--nu", cfg.nu, "level spent on the resampling event");
    app.add_option("--max-adj", cfg.max_adj, "assumed maximum adjacency");
    app.add_option("--max-cond", max_cond, "largest conditioning set (default: max-adj)");
    app.add_option("--truncation", trunc, "truncate resampled statistics at +-t sd");
    app.add_option("--half-factor", cfg.half_factor, "Fisher z with the 1/2 factor (true/false)");
    app.add_option("--orient", cfg.orient, "standard or majority");
    app.add_option("--level", cfg.level, "validity screening: basic or strict");
    app.add_option("--seed", seed, "master seed (drawn from entropy if absent)");
    app.add_option("--cap", cfg.cap, "cap on enumerated DAGs per graph");
}

}  // namespace

// ---------------------------------------------------------------- JSON

json to_json(const RunConfig& c) {
    return {{"data", c.data},
            {"tiers", c.tiers},
            {"forbid", c.forbid},
            {"require", c.require},
            {"scope", c.scope},
            {"exposure", c.exposure},
            {"outcome", c.outcome},
            {"gamma", c.gamma},
            {"nu", c.nu},
            {"M", c.M},
            {"c_star", c.c_star},
            {"grid", c.grid},
            {"max_adj", c.max_adj},
            {"max_cond_size", optional_json(c.max_cond_size)},
            {"truncation", optional_json(c.truncation)},
            {"half_factor", c.half_factor},
            {"orient", c.orient},
            {"level", c.level},
            {"policy", c.policy},
            {"alpha", optional_json(c.alpha)},
            {"seed", optional_json(c.seed)},
            {"cap", c.cap}};
}

RunConfig run_config_from_json(const json& j) {
    check_keys(j, {"data", "tiers", "forbid", "require", "scope", "exposure", "outcome", "gamma", "nu", "M", "c_star",
                   "grid", "max_adj", "max_cond_size", "truncation", "half_factor", "orient", "level", "policy",
                   "alpha", "seed", "cap"});
    RunConfig c;
    auto set = [&](const char* key, auto& field) {
        if (j.contains(key)) field = get_as<std::decay_t<decltype(field)>>(j, key);
    };
    auto set_opt = [&](const char* key, auto& field) {
        if (j.contains(key)) field = get_optional<typename std::decay_t<decltype(field)>::value_type>(j, key);
    };
    set("data", c.data);
    if (j.contains("tiers")) {
        // Either the string spec or {"A": 1, ...}.
        if (j["tiers"].is_object()) {
            std::map<int, std::vector<std::string>> by_tier;
            for (const auto& [name, t] : j["tiers"].items()) {
                if (!t.is_number_integer()) throw ConfigError("tier of '" + name + "' must be an integer");
                by_tier[t.get<int>()].push_back(name);
            }
            std::string spec;
            for (const auto& [t, members] : by_tier) {
                if (!spec.empty()) spec += ';';
                for (std::size_t k = 0; k < members.size(); ++k) spec += (k ? "," : "") + members[k];
                spec += ":" + std::to_string(t);
            }
            c.tiers = spec;
        } else {
            set("tiers", c.tiers);
        }
    }
    set("forbid", c.forbid);
    set("require", c.require);
    set("scope", c.scope);
    set("exposure", c.exposure);
    set("outcome", c.outcome);
    set("gamma", c.gamma);
    set("nu", c.nu);
    set("M", c.M);
    set("c_star", c.c_star);
    set("grid", c.grid);
    set("max_adj", c.max_adj);
    set_opt("max_cond_size", c.max_cond_size);
    set_opt("truncation", c.truncation);
    set("half_factor", c.half_factor);
    set("orient", c.orient);
    set("level", c.level);
    set("policy", c.policy);
    set_opt("alpha", c.alpha);
    set_opt("seed", c.seed);
    set("cap", c.cap);
    return c;
}

json to_json(const simulation::ScenarioConfig& s) {
    return {{"id", s.id},
            {"d", s.d},
            {"expected_neighbors", s.expected_neighbors},
            {"n", s.n},
            {"Ms", s.Ms},
            {"grid", s.grid},
            {"heuristic", s.heuristic},
            {"nu", s.nu},
            {"gamma", s.gamma},
            {"max_adj", s.max_adj},
            {"max_cond_size", optional_json(s.max_cond_size)},
            {"tiers", s.tiers},
            {"replicates", s.replicates},
            {"truncation", optional_json(s.truncation)},
            {"half_factor", s.half_factor},
            {"exposure", s.exposure},
            {"outcome", s.outcome},
            {"master_seed", s.master_seed},
            {"naive_alphas", s.naive_alphas},
            {"oracle", s.oracle},
            {"level", level_name(s.level)},
            {"orient", orient_name(s.orient_mode)}};
}

simulation::ScenarioConfig scenario_from_json(const json& j) {
    check_keys(j, {"id", "d", "expected_neighbors", "n", "Ms", "grid", "heuristic", "nu", "gamma", "max_adj",
                   "max_cond_size", "tiers", "replicates", "truncation", "half_factor", "exposure", "outcome",
                   "master_seed", "naive_alphas", "oracle", "level", "orient"});
    simulation::ScenarioConfig s;
    auto set = [&](const char* key, auto& field) {
        if (j.contains(key)) field = get_as<std::decay_t<decltype(field)>>(j, key);
    };
    auto set_opt = [&](const char* key, auto& field) {
        if (j.contains(key)) field = get_optional<typename std::decay_t<decltype(field)>::value_type>(j, key);
    };
    set("id", s.id);
    set("d", s.d);
    set("expected_neighbors", s.expected_neighbors);
    set("n", s.n);
    set("Ms", s.Ms);
    set("grid", s.grid);
    set("heuristic", s.heuristic);
    set("nu", s.nu);
    set("gamma", s.gamma);
    set("max_adj", s.max_adj);
    set_opt("max_cond_size", s.max_cond_size);
    set("tiers", s.tiers);
    set("replicates", s.replicates);
    set_opt("truncation", s.truncation);
    set("half_factor", s.half_factor);
    set("exposure", s.exposure);
    set("outcome", s.outcome);
    set("master_seed", s.master_seed);
    set("naive_alphas", s.naive_alphas);
    set("oracle", s.oracle);
    if (j.contains("level")) s.level = parse_level(get_as<std::string>(j, "level"));
    if (j.contains("orient")) s.orient_mode = parse_orient(get_as<std::string>(j, "orient"));
    return s;
}

// ---------------------------------------------------------------- parsing

std::vector<int> parse_tier_spec(std::string_view spec, const std::vector<std::string>& names) {
    std::vector<int> tiers(names.size(), 0);
    for (const auto& group : split(spec, ';')) {
        if (group.empty()) continue;
        const auto colon = group.rfind(':');
        if (colon == std::string::npos) throw ConfigError("tier group '" + group + "' lacks ':<tier>'");
        int t = 0;
        try {
            std::size_t used = 0;
            const std::string num = trim(group.substr(colon + 1));
            t = std::stoi(num, &used);
            if (used != num.size()) throw std::invalid_argument(num);
        } catch (const std::exception&) {
            throw ConfigError("bad tier number in '" + group + "'");
        }
        if (t < 1) throw ConfigError("tiers must be positive integers");
        for (const auto& name : split(std::string_view(group).substr(0, colon), ',')) {
            const int k = resolve(name, names);
            if (tiers[static_cast<std::size_t>(k)] != 0) throw ConfigError("variable '" + name + "' has two tiers");
            tiers[static_cast<std::size_t>(k)] = t;
        }
    }
    for (std::size_t k = 0; k < names.size(); ++k)
        if (tiers[k] == 0) throw ConfigError("variable '" + names[k] + "' has no tier");
    return tiers;
}

std::pair<int, int> parse_forbidden(std::string_view text, const std::vector<std::string>& names) {
    return parse_pair(text, "->", names);
}

std::pair<int, int> parse_required(std::string_view text, const std::vector<std::string>& names) {
    return parse_pair(text, "--", names);
}

int default_jobs() {
    if (const char* env = std::getenv("RESCI_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
    }
    return 1;
}

// ---------------------------------------------------------------- run

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resampling-based confidence sets for causal effects after tiered PC"};
    app.name("resci");
    app.require_subcommand(1);
    int jobs = default_jobs();

    // discover / effect
    RunConfig run_cfg;
    std::optional<int> max_cond;
    std::optional<double> trunc, alpha;
    std::optional<std::uint64_t> seed;
    std::string out_path, svg_path;
    bool dot = false;
    auto* discover = app.add_subcommand("discover", "resampled (or classical) tiered PC runs with validity screening");
    auto* effect = app.add_subcommand("effect", "union confidence set for the effect of exposure on outcome");
    for (auto* sub : {discover, effect}) {
        add_run_options(*sub, run_cfg, max_cond, trunc, seed);
        sub->add_option("--jobs", jobs, "worker threads");
    }
    discover->add_option("--alpha", alpha, "single classical PC run at this level");
    discover->add_option("--out", out_path, "directory for graph files and report.json");
    discover->add_flag("--dot", dot, "also write DOT files");
    effect->add_option("--exposure", run_cfg.exposure, "exposure variable name");
    effect->add_option("--outcome", run_cfg.outcome, "outcome variable name");
    effect->add_option("--gamma", run_cfg.gamma, "overall error level");
    effect->add_option("--grid", run_cfg.grid, "choose c* by the kept-percentage heuristic over this grid")
        ->delimiter(',');
    effect->add_option("--policy", run_cfg.policy, "parents, tier_block or both");
    effect->add_option("--out", out_path, "report path (default stdout)");

    // bench
    simulation::ScenarioConfig sc;
    sc.id = "custom";
    int figure = 0;
    std::optional<int> replicates;
    std::string level = "strict", orient = "standard";
    bool no_oracle = false;
    auto* bench = app.add_subcommand("bench", "simulation benchmark; writes a tidy CSV");
    bench->add_option("--config", "JSON scenario, {\"scenarios\": [...]} or an earlier bench CSV");
    bench->add_option("--paper-fig", figure, "preset scenarios of figure 1-5")->check(CLI::Range(1, 5));
    bench->add_option("--id", sc.id);
    bench->add_option("--d", sc.d, "number of variables");
    bench->add_option("--en", sc.expected_neighbors, "expected neighbours per node");
    bench->add_option("--n", sc.n, "sample size");
    bench->add_option("--M", sc.Ms, "resampling sizes")->delimiter(',');
    bench->add_option("--grid", sc.grid, "c* grid")->delimiter(',');
    bench->add_flag("--heuristic", sc.heuristic, "also report the heuristic choice of c*");
    bench->add_option("--tiers", sc.tiers, "one tier per node, e.g. 1,1,2,2")->delimiter(',');
    bench->add_option("--exposure", sc.exposure, "exposure node index");
    bench->add_option("--outcome", sc.outcome, "outcome node index");
    bench->add_option("--truncation", sc.truncation);
    bench->add_option("--half-factor", sc.half_factor);
    bench->add_option("--level", level, "basic or strict");
    bench->add_option("--orient", orient, "standard or majority");
    bench->add_option("--naive-alphas", sc.naive_alphas)->delimiter(',');
    bench->add_flag("--no-oracle", no_oracle);
    bench->add_option("--nu", sc.nu);
    bench->add_option("--gamma", sc.gamma);
    bench->add_option("--max-adj", sc.max_adj);
    bench->add_option("--max-cond", sc.max_cond_size);
    bench->add_option("--replicates", replicates);
    bench->add_option("--seed", seed);
    bench->add_option("--jobs", jobs, "worker threads");
    bench->add_option("--out", out_path, "CSV path (default stdout)");
    bench->add_option("--svg", svg_path, "also write an SVG of the series");

    // plot-data
    std::string in_path, x_axis = "auto";
    auto* plot = app.add_subcommand("plot-data", "tidy plotting series from a bench CSV");
    plot->add_option("--in", in_path, "bench CSV")->required();
    plot->add_option("--x", x_axis, "auto, c_star, n or M");
    plot->add_option("--out", out_path, "CSV path (default stdout)");
    plot->add_option("--svg", svg_path, "also write an SVG");

    try {
        const auto config_path = find_config(args);
        const bool run_command = !args.empty() && (args[0] == "discover" || args[0] == "effect");
        if (config_path && run_command) {
            run_cfg = run_config_from_json(unwrap_config(read_json_file(*config_path)));
            max_cond = run_cfg.max_cond_size;
            trunc = run_cfg.truncation;
            alpha = run_cfg.alpha;
            seed = run_cfg.seed;
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (jobs < 1) throw ConfigError("--jobs must be positive");

        if (*discover || *effect) {
            run_cfg.max_cond_size = max_cond;
            run_cfg.truncation = trunc;
            run_cfg.alpha = *discover ? alpha : std::nullopt;
            if (!seed) {
                seed = entropy_seed();
                err << "seed: " << *seed << '\n';
            }
            run_cfg.seed = seed;
            if (*discover) return cmd_discover(run_cfg, out_path, dot, jobs, out);
            return cmd_effect(run_cfg, out_path, jobs, out, err);
        }

        if (*bench) {
            std::vector<simulation::ScenarioConfig> scenarios;
            bool seeded = false;
            if (figure != 0) {
                scenarios = simulation::figure_preset(figure);
            } else if (config_path) {
                const json j = unwrap_config(read_json_file(*config_path));
                const json list = j.is_object() && j.contains("scenarios") ? j["scenarios"] : json::array({j});
                if (!list.is_array() || list.empty()) throw ConfigError("\"scenarios\" must be a nonempty array");
                for (const auto& s : list) scenarios.push_back(scenario_from_json(s));
                seeded = std::all_of(list.begin(), list.end(), [](const json& s) { return s.contains("master_seed"); });
            } else {
                sc.level = parse_level(level);
                sc.orient_mode = parse_orient(orient);
                sc.oracle = !no_oracle;
                scenarios.push_back(sc);
            }
            if (replicates)
                for (auto& s : scenarios) s.replicates = *replicates;
            if (!seed && !seeded) {
                seed = entropy_seed();
                err << "seed: " << *seed << '\n';
            }
            if (seed)
                for (auto& s : scenarios) s.master_seed = *seed;
            return cmd_bench(std::move(scenarios), out_path, svg_path, jobs, out);
        }

        return cmd_plot(in_path, x_axis, out_path, svg_path, out);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const stats::DataParseError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const stats::SingularMatrixError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace resci::cli
