#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "tncap/sim.hpp"

namespace tncap::sim::internal {

// Stream tags for the counter-based generator; combined with the node id so
// adding nodes or links never perturbs other draws.
enum StreamTag : std::uint64_t {
    kCoin = 1,      // aloha per-slot transmit coins
    kBackoff = 2,   // csma backoff durations
    kHold = 3,      // csma transmission durations
    kArrival = 4,   // bernoulli arrival coins
};

inline std::uint64_t stream_id(StreamTag tag, int node) {
    return (static_cast<std::uint64_t>(tag) << 32) |
           static_cast<std::uint64_t>(node);
}

// Routing and queue state shared by the slotted and event-driven engines.
struct Net {
    const contention::Topology& topo;
    const contention::ContentionGraph& graph;
    const SimConfig& cfg;

    int num_nodes = 0;
    int num_links = 0;
    int num_flows = 0;

    std::vector<int> link_src, link_dst;
    std::vector<std::vector<int>> next_link;  // [node][flow] -> link or -1
    std::vector<int> flow_dst;
    std::vector<int> default_link;   // [node] lowest outgoing link or -1
    std::vector<int> source_flow;    // [node] flow originating here or -1

    std::vector<std::deque<int>> queue;  // [node] flow ids, FIFO
    std::vector<bool> saturated;         // [node]

    std::int64_t total_backlog = 0;

    // Fluid-arrival accumulators per flow.
    std::vector<double> fluid_acc;

    explicit Net(const contention::Topology& t,
                 const contention::ContentionGraph& g, const SimConfig& c);

    bool effective_nonempty(int node) const {
        return saturated[node] || !queue[node].empty();
    }
    // Flow the node would serve next; -1 when idle.
    int head_flow(int node) const {
        if (!queue[node].empty()) return queue[node].front();
        if (saturated[node]) return source_flow[node];
        return -1;
    }
    // Link the node's next transmission uses (default link when empty).
    int active_link(int node) const {
        int f = head_flow(node);
        if (f >= 0) {
            int l = next_link[node][f];
            if (l >= 0) return l;
        }
        return default_link[node];
    }
};

// Observation plumbing shared by both engines.
struct Recorder {
    SimTrace trace;
    const SimConfig* cfg = nullptr;
    int num_nodes = 0, num_flows = 0;

    std::vector<double> samples;          // sorted requested times
    std::size_t next_sample = 0;
    double next_decade = 10.0;

    // Per-slot scratch, flushed into the full_* rows.
    std::vector<std::int64_t> slot_exo, slot_arr, slot_dep;
    std::vector<int> slot_attempts;
    double slot_opportunities = 0.0, slot_nonempty = 0.0;

    void init(const Net& net, double horizon);
    void begin_slot();
    void end_slot(const Net& net, double t,
                  const std::vector<std::int64_t>& delivered);
    void record_decades_and_samples(double t,
                                    const std::vector<std::int64_t>& delivered);
    void finish(const Net& net, double horizon,
                const std::vector<std::int64_t>& delivered,
                const std::vector<std::int64_t>& arrivals,
                const std::vector<std::int64_t>& departures);
};

SimTrace run_slotted(Net& net);
SimTrace run_csma(Net& net);

}  // namespace tncap::sim::internal
