#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_map>

#include "sim_internal.hpp"
#include "tncap/rng.hpp"

namespace tncap::sim::internal {

namespace {

enum class EventKind : std::uint8_t { backoff, hold_end, complete, tick };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;  // FIFO tie-break, deterministic
    EventKind kind = EventKind::tick;
    int node = -1;
    std::uint64_t version = 0;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

enum class CState : std::uint8_t { off, paused, counting, tx };

// Contender per node: off (not contending), paused (wants the channel but a
// conflicting link is on the air; backoff frozen), counting (backoff timer
// running), tx (holding the channel). Freezes keep the remaining backoff;
// leaving contention or finishing a hold discards it.
struct NodeState {
    CState state = CState::off;
    double remaining = -1.0;  // <0 means draw a fresh backoff on entry
    double expire_time = 0.0;
    std::uint64_t version = 0;  // invalidates scheduled backoff events
    int tx_link = -1;
    bool in_service = false;
    double service_start = 0.0;
    double head_progress = 0.0;  // served fraction of the head packet
    std::uint64_t svc_version = 0;
};

struct CsmaSim {
    Net& net;
    Recorder rec;
    std::vector<std::int64_t> delivered, arrivals, departures;

    std::priority_queue<Event, std::vector<Event>, EventLater> events;
    std::uint64_t next_seq = 0;
    std::vector<NodeState> nodes;
    std::vector<char> link_on;
    std::vector<rng::Stream> backoff_rng, hold_rng;

    double now = 0.0;
    double last_integrate = 0.0;
    int ntx = 0, ntx_nonempty = 0;
    std::uint64_t cur_mask = 0;
    bool track_occupancy = false;
    std::unordered_map<std::uint64_t, double> occupancy;

    // per-tick scratch for record_full
    double interval_opp = 0.0, interval_nonempty = 0.0;

    explicit CsmaSim(Net& n) : net(n) {
        rec.init(net, net.cfg.horizon);
        delivered.assign(net.num_flows, 0);
        arrivals.assign(net.num_nodes, 0);
        departures.assign(net.num_nodes, 0);
        nodes.resize(net.num_nodes);
        link_on.assign(net.num_links, 0);
        track_occupancy = net.num_links <= 64;
        backoff_rng.resize(net.num_nodes);
        hold_rng.resize(net.num_nodes);
        for (int u = 0; u < net.num_nodes; ++u) {
            backoff_rng[u] = {net.cfg.seed, stream_id(kBackoff, u), 0};
            hold_rng[u] = {net.cfg.seed, stream_id(kHold, u), 0};
        }
    }

    void push(double time, EventKind kind, int node, std::uint64_t version) {
        events.push({time, next_seq++, kind, node, version});
    }

    void integrate(double to) {
        double dt = to - last_integrate;
        if (dt > 0.0) {
            rec.trace.opportunities += dt * ntx;
            rec.trace.nonempty_opportunities += dt * ntx_nonempty;
            interval_opp += dt * ntx;
            interval_nonempty += dt * ntx_nonempty;
            if (track_occupancy) occupancy[cur_mask] += dt;
        }
        last_integrate = to;
    }

    void recount() {
        ntx = 0;
        ntx_nonempty = 0;
        cur_mask = 0;
        for (int u = 0; u < net.num_nodes; ++u) {
            if (nodes[u].state != CState::tx) continue;
            ++ntx;
            if (net.effective_nonempty(u)) ++ntx_nonempty;
            if (track_occupancy)
                cur_mask |= (std::uint64_t{1} << nodes[u].tx_link);
        }
    }

    bool blocked(int node) const {
        int link = net.active_link(node);
        if (link < 0) return true;
        for (int m : net.graph.neighbors(link))
            if (link_on[m]) return true;
        return false;
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

    // Contender/service state machine; run for every node after each event.
    void settle() {
        for (int u = 0; u < net.num_nodes; ++u) {
            NodeState& s = nodes[u];
            if (s.state == CState::tx) {
                if (!s.in_service && net.effective_nonempty(u)) {
                    s.in_service = true;
                    s.service_start = now;
                    double need = (1.0 - s.head_progress) / net.cfg.rate;
                    push(now + need, EventKind::complete, u, ++s.svc_version);
                }
                continue;
            }
            bool eligible = net.default_link[u] >= 0 &&
                            (net.cfg.empty_policy == EmptyPolicy::hold ||
                             net.effective_nonempty(u));
            if (!eligible) {
                if (s.state != CState::off) {
                    ++s.version;
                    s.state = CState::off;
                    s.remaining = -1.0;  // leaving contention resets backoff
                }
                continue;
            }
            if (blocked(u)) {
                if (s.state == CState::counting) {
                    s.remaining = s.expire_time - now;  // freeze, keep it
                    ++s.version;
                    s.state = CState::paused;
                } else if (s.state == CState::off) {
                    s.state = CState::paused;
                    if (s.remaining < 0.0)
                        s.remaining = backoff_rng[u].exponential(net.cfg.nu);
                }
                continue;
            }
            if (s.state != CState::counting) {
                if (s.remaining < 0.0)
                    s.remaining = backoff_rng[u].exponential(net.cfg.nu);
                s.state = CState::counting;
                s.expire_time = now + s.remaining;
                push(s.expire_time, EventKind::backoff, u, ++s.version);
            }
        }
    }

    void on_backoff(const Event& ev) {
        NodeState& s = nodes[ev.node];
        if (ev.version != s.version || s.state != CState::counting) return;
        s.state = CState::tx;
        s.tx_link = net.active_link(ev.node);
        s.remaining = -1.0;
        link_on[s.tx_link] = 1;
        double duration = hold_rng[ev.node].exponential(net.cfg.mu);
        push(now + duration, EventKind::hold_end, ev.node, 0);
    }

    void on_hold_end(const Event& ev) {
        NodeState& s = nodes[ev.node];
        if (s.state != CState::tx) return;
        if (s.in_service) {
            // Preempt-resume: the partially served head packet keeps its
            // progress for the next hold.
            s.head_progress += (now - s.service_start) * net.cfg.rate;
            s.head_progress = std::min(s.head_progress, 0.999999999999);
            s.in_service = false;
        }
        ++s.svc_version;  // cancels any scheduled completion
        link_on[s.tx_link] = 0;
        s.tx_link = -1;
        s.state = CState::off;
    }

    void on_complete(const Event& ev) {
        NodeState& s = nodes[ev.node];
        if (ev.version != s.svc_version || s.state != CState::tx ||
            !s.in_service)
            return;
        const int u = ev.node;
        int flow = net.head_flow(u);
        if (flow < 0) return;  // cannot happen while in service
        if (net.queue[u].empty()) {
            ++arrivals[u];  // saturated local supply, created at service end
            if (net.cfg.record_full) ++rec.slot_arr[u];
        } else {
            net.queue[u].pop_front();
            --net.total_backlog;
        }
        ++departures[u];
        if (net.cfg.record_full) ++rec.slot_dep[u];
        s.head_progress = 0.0;
        s.in_service = false;  // settle() restarts if more data waits
        int link = net.next_link[u][flow];
        int dst = net.link_dst[link];
        if (dst == net.flow_dst[flow])
            ++delivered[flow];
        else
            enqueue(dst, flow);
    }

    void on_tick(double t) {
        const SimConfig& cfg = net.cfg;
        if (cfg.arrivals != ArrivalKind::saturated) {
            for (int f = 0; f < net.num_flows; ++f) {
                int src = net.topo.sd_pairs[f].first;
                std::int64_t count = 0;
                if (cfg.arrivals == ArrivalKind::fluid) {
                    net.fluid_acc[f] += cfg.lambda;
                    count =
                        static_cast<std::int64_t>(std::floor(net.fluid_acc[f]));
                    net.fluid_acc[f] -= static_cast<double>(count);
                } else {
                    count = rng::bernoulli(cfg.lambda, cfg.seed,
                                           stream_id(kArrival, src),
                                           static_cast<std::uint64_t>(t))
                                ? 1
                                : 0;
                }
                for (std::int64_t i = 0; i < count; ++i) {
                    enqueue(src, f);
                    if (cfg.record_full) ++rec.slot_exo[src];
                }
            }
        }
        if (cfg.record_full) {
            std::vector<std::int64_t> backlog(net.num_nodes);
            for (int u = 0; u < net.num_nodes; ++u)
                backlog[u] = static_cast<std::int64_t>(net.queue[u].size());
            rec.trace.full_backlog.push_back(std::move(backlog));
            rec.trace.full_exogenous.push_back(rec.slot_exo);
            rec.trace.full_arrivals.push_back(rec.slot_arr);
            rec.trace.full_departures.push_back(rec.slot_dep);
            rec.trace.full_delivered.push_back(delivered);
            rec.trace.full_attempts.push_back({});
            rec.trace.full_opportunities.push_back(interval_opp);
            rec.trace.full_nonempty.push_back(interval_nonempty);
            std::fill(rec.slot_exo.begin(), rec.slot_exo.end(), 0);
            std::fill(rec.slot_arr.begin(), rec.slot_arr.end(), 0);
            std::fill(rec.slot_dep.begin(), rec.slot_dep.end(), 0);
        }
        interval_opp = 0.0;
        interval_nonempty = 0.0;
        rec.record_decades_and_samples(t, delivered);
        if (t + 1.0 <= cfg.horizon) push(t + 1.0, EventKind::tick, -1, 0);
    }

    SimTrace finish() {
        integrate(net.cfg.horizon);
        if (track_occupancy) {
            std::vector<std::pair<std::uint64_t, double>> items(
                occupancy.begin(), occupancy.end());
            std::sort(items.begin(), items.end());
            for (const auto& [mask, time] : items) {
                std::vector<int> links;
                for (int l = 0; l < net.num_links; ++l)
                    if (mask & (std::uint64_t{1} << l)) links.push_back(l);
                rec.trace.state_occupancy.push_back(
                    {std::move(links), time / net.cfg.horizon});
            }
            std::sort(rec.trace.state_occupancy.begin(),
                      rec.trace.state_occupancy.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first.size() != b.first.size())
                              return a.first.size() < b.first.size();
                          return a.first < b.first;
                      });
        }
        rec.finish(net, net.cfg.horizon, delivered, arrivals, departures);
        return std::move(rec.trace);
    }
};

}  // namespace

SimTrace run_csma(Net& net) {
    CsmaSim sim(net);
    sim.push(1.0, EventKind::tick, -1, 0);
    sim.settle();  // backoffs start at time zero
    while (!sim.events.empty() && !sim.rec.trace.cap_exceeded) {
        Event ev = sim.events.top();
        if (ev.time > net.cfg.horizon) break;
        sim.events.pop();
        sim.now = ev.time;
        sim.integrate(ev.time);
        switch (ev.kind) {
            case EventKind::backoff: sim.on_backoff(ev); break;
            case EventKind::hold_end: sim.on_hold_end(ev); break;
            case EventKind::complete: sim.on_complete(ev); break;
            case EventKind::tick: sim.on_tick(ev.time); break;
        }
        sim.settle();
        sim.recount();
    }
    return sim.finish();
}

}  // namespace tncap::sim::internal
