#include <nlohmann/json.hpp>
#include <stdexcept>

#include "tncap/contention.hpp"
#include "tncap/errors.hpp"

namespace tncap::contention {

using ordered_json = nlohmann::ordered_json;

std::string topology_to_json(const Topology& topology) {
    ordered_json j;
    j["nodes"] = ordered_json::array();
    for (const auto& p : topology.nodes) j["nodes"].push_back({p[0], p[1]});
    j["sd_pairs"] = ordered_json::array();
    for (const auto& [s, d] : topology.sd_pairs)
        j["sd_pairs"].push_back({s, d});
    j["range"] = topology.range;
    return j.dump(2) + "\n";
}

Topology topology_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "nodes" && key != "sd_pairs" && key != "range")
            throw model_error("topology json: unknown key '" + key + "'");
    }
    if (!j.contains("nodes") || !j.contains("sd_pairs") || !j.contains("range"))
        throw model_error("topology json: nodes, sd_pairs and range required");
    Topology topo;
    for (const auto& p : j["nodes"]) {
        if (!p.is_array() || p.size() != 2)
            throw model_error("topology json: node entries are [x,y]");
        topo.nodes.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    const int n = static_cast<int>(topo.nodes.size());
    for (const auto& p : j["sd_pairs"]) {
        if (!p.is_array() || p.size() != 2)
            throw model_error("topology json: sd entries are [s,d]");
        int s = p[0].get<int>(), d = p[1].get<int>();
        if (s < 0 || d < 0 || s >= n || d >= n || s == d)
            throw model_error("topology json: bad sd pair");
        topo.sd_pairs.push_back({s, d});
    }
    const double range = j["range"].get<double>();
    // Links and routes are derived state; rebuild them deterministically.
    return complete_topology(std::move(topo), range);
}

}  // namespace tncap::contention
