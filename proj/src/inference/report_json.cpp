#include "resci/inference/report_json.hpp"

namespace resci::inference {

namespace {

nlohmann::json node_list(NodeSet s, const std::vector<std::string>& names) {
    nlohmann::json out = nlohmann::json::array();
    for (int k : s) {
        if (names.empty()) {
            out.push_back(k);
        } else {
            out.push_back(names.at(static_cast<std::size_t>(k)));
        }
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const discovery::ResampleConfig& cfg) {
    nlohmann::json j;
    j["M"] = cfg.M;
    j["c_star"] = cfg.c_star;
    j["nu"] = cfg.nu;
    j["max_adj"] = cfg.max_adj;
    j["max_cond_size"] = cfg.effective_max_cond_size();
    j["truncation"] = cfg.truncation ? nlohmann::json(*cfg.truncation) : nlohmann::json(nullptr);
    j["seed"] = cfg.master_seed;
    j["half_factor"] = cfg.half_factor;
    j["orient_mode"] = cfg.orient_mode == graph::OrientMode::standard ? "standard" : "majority";
    return j;
}

nlohmann::json to_json(const IntervalUnion& u) {
    nlohmann::json j;
    j["components"] = nlohmann::json::array();
    for (const auto& iv : u.components()) j["components"].push_back({iv.lo, iv.hi});
    if (auto h = u.hull()) {
        j["hull"] = {h->lo, h->hi};
    } else {
        j["hull"] = nullptr;
    }
    j["total_length"] = u.total_length();
    j["hull_length"] = u.hull_length();
    return j;
}

nlohmann::json to_json(const std::vector<KeptRow>& table) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : table)
        out.push_back({{"c_star", row.c_star}, {"kept", row.kept}, {"M", row.M}, {"kept_pct", 100.0 * row.kept_fraction()}});
    return out;
}

nlohmann::json to_json(const AggregationReport& report, const std::vector<std::string>& names) {
    nlohmann::json j;
    j["config"] = to_json(report.config);
    j["seed"] = report.config.master_seed;
    j["gamma"] = report.query.gamma;
    j["nu"] = report.config.nu;
    j["alpha1"] = report.alpha1;
    j["adjust_policy"] = std::string(to_string(report.query.policy));
    j["validity_level"] = report.query.level == graph::ValidityLevel::strict ? "strict" : "basic";
    j["L"] = report.L;
    j["tau"] = report.tau;
    j["threshold"] = report.threshold;
    j["clamp_count"] = report.clamp_count;
    j["kept_count"] = report.kept.size();
    j["kept_indices"] = report.kept;
    j["kept_pct"] = 100.0 * report.kept_fraction();
    nlohmann::json screening = nlohmann::json::array();
    for (auto r : report.screening) screening.push_back(std::string(graph::to_string(r)));
    j["screening"] = screening;
    nlohmann::json graphs = nlohmann::json::array();
    for (std::size_t k = 0; k < report.per_graph.size(); ++k) {
        const auto& g = report.per_graph[k];
        nlohmann::json ests = nlohmann::json::array();
        for (const auto& e : g.estimates)
            ests.push_back({{"beta", e.beta}, {"se", e.se}, {"adjust", node_list(e.adjust, names)}});
        nlohmann::json singular = nlohmann::json::array();
        for (auto s : g.singular_sets) singular.push_back(node_list(s, names));
        graphs.push_back({{"run", report.kept[k]},
                          {"num_dags", g.num_dags},
                          {"overflow", g.overflow},
                          {"estimates", ests},
                          {"singular_sets", singular}});
    }
    j["graphs"] = graphs;
    j["enumeration_overflow"] = report.any_overflow();
    if (report.ci) {
        j["ci"] = to_json(*report.ci);
        j["status"] = "ok";
    } else {
        j["ci"] = nullptr;
        j["status"] = "no_valid_graphs";
    }
    return j;
}

}  // namespace resci::inference
