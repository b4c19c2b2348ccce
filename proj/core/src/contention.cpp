#include "tncap/contention.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "tncap/errors.hpp"
#include "tncap/rng.hpp"

namespace tncap::contention {

int Topology::link_index(int src, int dst) const {
    for (std::size_t i = 0; i < links.size(); ++i)
        if (links[i].src == src && links[i].dst == dst)
            return static_cast<int>(i);
    return -1;
}

void Topology::validate() const {
    if (routes.size() != sd_pairs.size())
        throw model_error("topology: every sd pair needs exactly one route");
    for (std::size_t p = 0; p < sd_pairs.size(); ++p) {
        const auto& route = routes[p];
        if (route.empty()) throw model_error("topology: empty route");
        int at = sd_pairs[p].first;
        for (int li : route) {
            if (li < 0 || li >= static_cast<int>(links.size()))
                throw model_error("topology: route references unknown link");
            if (links[li].src != at)
                throw model_error("topology: route links are not connected");
            at = links[li].dst;
        }
        if (at != sd_pairs[p].second)
            throw model_error("topology: route does not end at the destination");
    }
}

void ContentionGraph::add_edge(int i, int j) {
    if (i == j) throw model_error("contention graph: self loop");
    if (i < 0 || j < 0 || i >= num_links() || j >= num_links())
        throw model_error("contention graph: link index out of range");
    if (adjacent(i, j)) return;
    adj_[i].insert(std::lower_bound(adj_[i].begin(), adj_[i].end(), j), j);
    adj_[j].insert(std::lower_bound(adj_[j].begin(), adj_[j].end(), i), i);
}

bool ContentionGraph::adjacent(int i, int j) const {
    const auto& a = adj_[i];
    return std::binary_search(a.begin(), a.end(), j);
}

std::size_t ContentionGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& a : adj_) total += a.size();
    return total / 2;
}

std::pair<Topology, ContentionGraph> line_network(int n,
                                                  int contention_range) {
    if (n < 2) throw model_error("line network needs at least 2 nodes");
    if (contention_range < 1)
        throw std::invalid_argument("contention range must be >= 1");
    Topology topo;
    topo.nodes.reserve(n);
    for (int i = 0; i < n; ++i)
        topo.nodes.push_back({static_cast<double>(i), 0.0});
    for (int i = 0; i + 1 < n; ++i) topo.links.push_back({i, i + 1});
    topo.sd_pairs.push_back({0, n - 1});
    std::vector<int> route(n - 1);
    for (int i = 0; i + 1 < n; ++i) route[i] = i;
    topo.routes.push_back(std::move(route));
    topo.validate();

    ContentionGraph g(n - 1);
    for (int i = 0; i + 1 < n; ++i)
        for (int j = i + 1; j < n - 1 && j - i < contention_range; ++j)
            g.add_edge(i, j);
    return {std::move(topo), std::move(g)};
}

namespace {

void enumerate_sets(const ContentionGraph& g, std::vector<int>& current,
                    int next, std::size_t max_states,
                    std::vector<std::vector<int>>& out) {
    if (out.size() >= max_states)
        throw capacity_error("independent-set enumeration exceeded cap",
                             out.size());
    out.push_back(current);
    for (int v = next; v < g.num_links(); ++v) {
        bool ok = true;
        for (int u : current)
            if (g.adjacent(u, v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        current.push_back(v);
        enumerate_sets(g, current, v + 1, max_states, out);
        current.pop_back();
    }
}

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Hop distances to `target` over the unit-disk graph at `range`.
std::vector<int> hop_distances(const Topology& topo, double range,
                               int target) {
    const int n = static_cast<int>(topo.nodes.size());
    std::vector<int> d(n, -1);
    std::queue<int> q;
    d[target] = 0;
    q.push(target);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v) {
            if (d[v] >= 0 || v == u) continue;
            if (dist(topo.nodes[u], topo.nodes[v]) <= range) {
                d[v] = d[u] + 1;
                q.push(v);
            }
        }
    }
    return d;
}

bool all_pairs_connected(const Topology& topo, double range) {
    for (const auto& [s, t] : topo.sd_pairs) {
        auto d = hop_distances(topo, range, t);
        if (d[s] < 0) return false;
    }
    return true;
}

// Fills topo.routes, appending any missing links in first-use order.
void build_routes(Topology& topo, double range) {
    topo.routes.clear();
    for (const auto& [s, t] : topo.sd_pairs) {
        auto d = hop_distances(topo, range, t);
        if (d[s] < 0)
            throw connectivity_error("pair (" + std::to_string(s) + "," +
                                     std::to_string(t) +
                                     ") is disconnected at this range");
        std::vector<int> route;
        int at = s;
        while (at != t) {
            int next = -1;
            for (int v = 0; v < static_cast<int>(topo.nodes.size()); ++v) {
                if (v == at || d[v] != d[at] - 1) continue;
                if (dist(topo.nodes[at], topo.nodes[v]) > range) continue;
                next = v;  // lowest index wins; scan is ascending
                break;
            }
            if (next < 0) throw connectivity_error("route construction failed");
            int li = topo.link_index(at, next);
            if (li < 0) {
                topo.links.push_back({at, next});
                li = static_cast<int>(topo.links.size()) - 1;
            }
            route.push_back(li);
            at = next;
        }
        topo.routes.push_back(std::move(route));
    }
    topo.validate();
}

}  // namespace

std::vector<std::vector<int>> independent_sets(const ContentionGraph& g,
                                               std::size_t max_states) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    enumerate_sets(g, current, 0, max_states, out);
    std::sort(out.begin(), out.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    return out;
}

std::vector<std::vector<int>> shortest_routes(const Topology& topology,
                                              double range) {
    Topology scratch = topology;
    build_routes(scratch, range);
    return scratch.routes;
}

Topology complete_topology(Topology topology, double range) {
    topology.range = range;
    build_routes(topology, range);
    return topology;
}

ContentionGraph interference_graph(const Topology& topology, double range) {
    const int m = static_cast<int>(topology.links.size());
    ContentionGraph g(m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const Link& a = topology.links[i];
            const Link& b = topology.links[j];
            bool conflict = a.src == b.src || a.src == b.dst ||
                            a.dst == b.src || a.dst == b.dst;
            for (int ea : {a.src, a.dst})
                for (int eb : {b.src, b.dst})
                    conflict = conflict ||
                               dist(topology.nodes[ea], topology.nodes[eb]) <=
                                   range;
            if (conflict) g.add_edge(i, j);
        }
    }
    return g;
}

RandomNetwork random_network(int n, std::uint64_t seed) {
    if (n < 2) throw model_error("random network needs at least 2 nodes");
    Topology topo;
    topo.nodes.reserve(n);
    constexpr std::uint64_t kPositionStream = 0x746f706f;  // node placement
    constexpr std::uint64_t kDestStream = 0x64657374;      // destination draw
    for (int i = 0; i < n; ++i) {
        double x = rng::uniform(seed, kPositionStream, 2 * i);
        double y = rng::uniform(seed, kPositionStream, 2 * i + 1);
        topo.nodes.push_back({x, y});
    }
    for (int s = 0; s < n; ++s) {
        // Uniform over the n-1 other nodes, no rejection.
        int d = static_cast<int>(rng::uniform(seed, kDestStream, s) * (n - 1));
        d = std::min(d, n - 2);
        if (d >= s) ++d;
        topo.sd_pairs.push_back({s, d});
    }

    // Minimum connecting range: connectivity is monotone in the range, so
    // bisect over the sorted pairwise distances.
    std::vector<double> candidates;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            candidates.push_back(dist(topo.nodes[i], topo.nodes[j]));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    std::size_t lo = 0, hi = candidates.size() - 1;
    if (!all_pairs_connected(topo, candidates[hi]))
        throw connectivity_error("random network cannot be connected");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (all_pairs_connected(topo, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    topo.range = candidates[lo];
    build_routes(topo, topo.range);

    RandomNetwork out;
    out.range = topo.range;
    out.graph = interference_graph(topo, topo.range);
    out.topology = std::move(topo);
    return out;
}

}  // namespace tncap::contention
