#include <cmath>

#include "sim_internal.hpp"
#include "tncap/rng.hpp"

namespace tncap::sim::internal {

namespace {

struct SlottedState {
    Net& net;
    Recorder rec;
    std::vector<std::int64_t> delivered;   // per flow
    std::vector<std::int64_t> arrivals;    // per node
    std::vector<std::int64_t> departures;  // per node

    explicit SlottedState(Net& n) : net(n) {
        rec.init(net, net.cfg.horizon);
        delivered.assign(net.num_flows, 0);
        arrivals.assign(net.num_nodes, 0);
        departures.assign(net.num_nodes, 0);
    }

    void enqueue(int node, int flow) {
        net.queue[node].push_back(flow);
        ++arrivals[node];
        ++net.total_backlog;
        if (net.cfg.record_full) ++rec.slot_arr[node];
        if (static_cast<double>(net.total_backlog) > rec.trace.max_total_backlog)
            rec.trace.max_total_backlog = static_cast<double>(net.total_backlog);
        if (static_cast<double>(net.total_backlog) > net.cfg.backlog_cap)
            rec.trace.cap_exceeded = true;
    }

    void inject(std::uint64_t t) {
        const SimConfig& cfg = net.cfg;
        if (cfg.arrivals == ArrivalKind::saturated) return;
        for (int f = 0; f < net.num_flows; ++f) {
            int src = net.topo.sd_pairs[f].first;
            std::int64_t count = 0;
            if (cfg.arrivals == ArrivalKind::fluid) {
                net.fluid_acc[f] += cfg.lambda;
                count = static_cast<std::int64_t>(std::floor(net.fluid_acc[f]));
                net.fluid_acc[f] -= static_cast<double>(count);
            } else {
                count = rng::bernoulli(cfg.lambda, cfg.seed,
                                       stream_id(kArrival, src), t)
                            ? 1
                            : 0;
            }
            for (std::int64_t i = 0; i < count; ++i) {
                enqueue(src, f);
                if (net.cfg.record_full) ++rec.slot_exo[src];
            }
        }
    }

    // Serve up to C packets from `node` over `link`; receivers see them next
    // slot via the relay buffer.
    void serve(int node, int link, std::vector<std::pair<int, int>>& relay) {
        const auto packets = static_cast<std::int64_t>(net.cfg.rate);
        for (std::int64_t i = 0; i < packets; ++i) {
            int flow = net.head_flow(node);
            if (flow < 0) break;
            if (net.next_link[node][flow] != link) break;  // FIFO head rules
            if (net.queue[node].empty()) {
                // Saturated local supply materializes at service time.
                ++arrivals[node];
                if (net.cfg.record_full) ++rec.slot_arr[node];
            } else {
                net.queue[node].pop_front();
                --net.total_backlog;
            }
            ++departures[node];
            if (net.cfg.record_full) ++rec.slot_dep[node];
            int dst = net.link_dst[link];
            if (dst == net.flow_dst[flow])
                ++delivered[flow];
            else
                relay.push_back({dst, flow});
        }
    }
};

}  // namespace

SimTrace run_slotted(Net& net) {
    const SimConfig& cfg = net.cfg;
    SlottedState st(net);
    const auto horizon = static_cast<std::uint64_t>(cfg.horizon);
    const bool aloha = cfg.mac == mmtp::MacKind::aloha;

    std::vector<int> attempts;            // link ids attempting this slot
    std::vector<char> attempting(net.num_links, 0);
    std::vector<std::pair<int, int>> relay;  // (node, flow) landing after slot

    for (std::uint64_t t = 1; t <= horizon && !st.rec.trace.cap_exceeded; ++t) {
        st.rec.begin_slot();
        st.inject(t);

        attempts.clear();
        std::fill(attempting.begin(), attempting.end(), 0);
        if (aloha) {
            for (int u = 0; u < net.num_nodes; ++u) {
                if (net.default_link[u] < 0) continue;
                if (cfg.empty_policy == EmptyPolicy::skip &&
                    !net.effective_nonempty(u))
                    continue;
                if (!rng::bernoulli(cfg.p, cfg.seed, stream_id(kCoin, u), t))
                    continue;
                int link = net.active_link(u);
                attempts.push_back(link);
                attempting[link] = 1;
            }
        } else {
            for (int link : cfg.schedule.at_slot(t)) {
                attempts.push_back(link);
                attempting[link] = 1;
            }
        }

        relay.clear();
        for (int link : attempts) {
            int u = net.link_src[link];
            bool nonempty = net.effective_nonempty(u);
            st.rec.trace.opportunities += 1.0;
            if (nonempty) st.rec.trace.nonempty_opportunities += 1.0;
            if (cfg.record_full) {
                st.rec.slot_attempts.push_back(link);
                st.rec.slot_opportunities += 1.0;
                if (nonempty) st.rec.slot_nonempty += 1.0;
            }
            if (!nonempty) continue;
            if (aloha) {
                bool blocked = false;
                for (int m : net.graph.neighbors(link))
                    if (attempting[m]) {
                        blocked = true;
                        break;
                    }
                if (blocked) continue;
            }
            st.serve(u, link, relay);
        }
        for (const auto& [node, flow] : relay) st.enqueue(node, flow);

        st.rec.end_slot(net, static_cast<double>(t), st.delivered);
    }

    st.rec.finish(net, cfg.horizon, st.delivered, st.arrivals, st.departures);
    return std::move(st.rec.trace);
}

}  // namespace tncap::sim::internal
