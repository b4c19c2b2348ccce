#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tncap::contention {

struct Link {
    int src = -1;
    int dst = -1;
    bool operator==(const Link&) const = default;
};

// Node positions, directed links carrying traffic, source-destination pairs
// and one route (ordered link list) per pair.
struct Topology {
    std::vector<std::array<double, 2>> nodes;
    std::vector<Link> links;
    std::vector<std::pair<int, int>> sd_pairs;
    std::vector<std::vector<int>> routes;
    double range = 0.0;

    int link_index(int src, int dst) const;  // -1 when absent
    void validate() const;                   // route connectivity, one route per pair
};

// Vertices are link indices; an edge means the two links cannot succeed in
// the same slot.
class ContentionGraph {
  public:
    ContentionGraph() = default;
    explicit ContentionGraph(int num_links) : adj_(num_links) {}

    void add_edge(int i, int j);
    int num_links() const { return static_cast<int>(adj_.size()); }
    bool adjacent(int i, int j) const;
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }
    std::size_t edge_count() const;

  private:
    std::vector<std::vector<int>> adj_;  // sorted, symmetric
};

// Line A_1 -> A_n with links i = 0..n-2; links i,j interfere iff
// 0 < |i-j| < contention_range.
std::pair<Topology, ContentionGraph> line_network(int n, int contention_range);

// All independent sets of g including the empty set, ordered by size then
// lexicographically; throws capacity_error beyond max_states.
std::vector<std::vector<int>> independent_sets(const ContentionGraph& g,
                                               std::size_t max_states = 20000);

struct RandomNetwork {
    Topology topology;
    ContentionGraph graph;
    double range = 0.0;
};

// n uniform nodes on the unit square, a random destination per source, the
// minimum range connecting every pair, shortest-path routes at that range,
// and the induced interference graph. Bit-reproducible for a given seed.
RandomNetwork random_network(int n, std::uint64_t seed);

// Minimum-hop route per sd pair at the given range; ties broken by lowest
// neighbor index. Throws connectivity_error naming the first unreachable pair.
// Returned link indices are valid for complete_topology(topology, range).
std::vector<std::vector<int>> shortest_routes(const Topology& topology,
                                              double range);

// The same routing pass, returning the whole topology with routes filled and
// any missing links appended in deterministic first-use order.
Topology complete_topology(Topology topology, double range);

// Interference rule for geometric topologies: links conflict iff they share
// a node or any endpoint of one is within `range` of any endpoint of the
// other.
ContentionGraph interference_graph(const Topology& topology, double range);

// {"nodes":[[x,y],...], "sd_pairs":[[s,d],...], "range":r}; routes, links and
// the contention graph are recomputed deterministically on import.
std::string topology_to_json(const Topology& topology);
Topology topology_from_json(const std::string& text);

}  // namespace tncap::contention
