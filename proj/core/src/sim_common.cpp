#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sim_internal.hpp"
#include "tncap/csv.hpp"
#include "tncap/errors.hpp"

namespace tncap::sim {

void SimConfig::validate(const contention::Topology& topo) const {
    if (!(horizon >= 1.0) || horizon != std::floor(horizon))
        throw std::invalid_argument("horizon must be an integer >= 1");
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
    if (mac != mmtp::MacKind::csma && rate != std::floor(rate))
        throw std::invalid_argument("slotted MACs need an integer rate");
    switch (mac) {
        case mmtp::MacKind::aloha:
            if (!(p > 0.0 && p < 1.0))
                throw std::invalid_argument("aloha: p must lie in (0,1)");
            break;
        case mmtp::MacKind::centralized: {
            schedule.validate();
            if (schedule.max_link() >= static_cast<int>(topo.links.size()))
                throw model_error("schedule references unknown link");
            break;
        }
        case mmtp::MacKind::csma:
            if (!(nu > 0.0) || !(mu > 0.0))
                throw std::invalid_argument("csma: nu, mu must be positive");
            break;
    }
    if (arrivals != ArrivalKind::saturated) {
        if (!(lambda >= 0.0))
            throw std::invalid_argument("lambda must be nonnegative");
        if (arrivals == ArrivalKind::bernoulli && lambda > 1.0)
            throw std::invalid_argument("bernoulli arrivals need lambda <= 1");
    }
    for (double s : sample_times)
        if (s != std::floor(s) || s < 0.0 || s > horizon)
            throw std::invalid_argument("sample times must be integers in [0,horizon]");
    topo.validate();
}

namespace internal {

Net::Net(const contention::Topology& t, const contention::ContentionGraph& g,
         const SimConfig& c)
    : topo(t), graph(g), cfg(c) {
    num_nodes = static_cast<int>(topo.nodes.size());
    num_links = static_cast<int>(topo.links.size());
    num_flows = static_cast<int>(topo.sd_pairs.size());
    if (g.num_links() != num_links)
        throw model_error("contention graph and topology disagree on links");

    link_src.resize(num_links);
    link_dst.resize(num_links);
    for (int l = 0; l < num_links; ++l) {
        link_src[l] = topo.links[l].src;
        link_dst[l] = topo.links[l].dst;
    }

    next_link.assign(num_nodes, std::vector<int>(num_flows, -1));
    flow_dst.resize(num_flows);
    for (int f = 0; f < num_flows; ++f) {
        flow_dst[f] = topo.sd_pairs[f].second;
        for (int l : topo.routes[f]) next_link[link_src[l]][f] = l;
    }

    default_link.assign(num_nodes, -1);
    for (int l = 0; l < num_links; ++l) {
        int u = link_src[l];
        if (default_link[u] < 0 || l < default_link[u]) default_link[u] = l;
    }

    source_flow.assign(num_nodes, -1);
    for (int f = 0; f < num_flows; ++f) {
        int s = topo.sd_pairs[f].first;
        if (cfg.arrivals == ArrivalKind::saturated && source_flow[s] >= 0)
            throw model_error("saturated arrivals need one flow per source");
        if (source_flow[s] < 0) source_flow[s] = f;
    }

    queue.assign(num_nodes, {});
    saturated.assign(num_nodes, false);
    if (cfg.arrivals == ArrivalKind::saturated)
        for (int f = 0; f < num_flows; ++f)
            saturated[topo.sd_pairs[f].first] = true;

    fluid_acc.assign(num_flows, 0.0);
}

void Recorder::init(const Net& net, double horizon) {
    cfg = &net.cfg;
    num_nodes = net.num_nodes;
    num_flows = net.num_flows;
    trace.horizon = horizon;
    trace.num_nodes = num_nodes;
    trace.num_flows = num_flows;
    trace.delivered.assign(num_flows, 0);
    trace.arrivals.assign(num_nodes, 0);
    trace.departures.assign(num_nodes, 0);
    trace.final_backlog.assign(num_nodes, 0);
    samples = cfg->sample_times;
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    next_sample = 0;
    next_decade = 10.0;
    if (cfg->record_full) {
        trace.full_backlog.push_back(
            std::vector<std::int64_t>(num_nodes, 0));  // initial state
    }
    slot_exo.assign(num_nodes, 0);
    slot_arr.assign(num_nodes, 0);
    slot_dep.assign(num_nodes, 0);
}

void Recorder::begin_slot() {
    if (!cfg->record_full) return;
    std::fill(slot_exo.begin(), slot_exo.end(), 0);
    std::fill(slot_arr.begin(), slot_arr.end(), 0);
    std::fill(slot_dep.begin(), slot_dep.end(), 0);
    slot_attempts.clear();
    slot_opportunities = 0.0;
    slot_nonempty = 0.0;
}

void Recorder::record_decades_and_samples(
    double t, const std::vector<std::int64_t>& delivered) {
    while (next_sample < samples.size() && samples[next_sample] <= t) {
        if (samples[next_sample] == t) {
            trace.sample_times.push_back(t);
            trace.delivered_at.push_back(delivered);
        }
        ++next_sample;
    }
    if (t == next_decade) {
        double omf = trace.opportunities > 0.0
                         ? trace.nonempty_opportunities / trace.opportunities
                         : 0.0;
        trace.decades.push_back({t, omf});
        next_decade *= 10.0;
    }
}

void Recorder::end_slot(const Net& net, double t,
                        const std::vector<std::int64_t>& delivered) {
    if (cfg->record_full) {
        std::vector<std::int64_t> backlog(num_nodes);
        for (int u = 0; u < num_nodes; ++u)
            backlog[u] = static_cast<std::int64_t>(net.queue[u].size());
        trace.full_backlog.push_back(std::move(backlog));
        trace.full_exogenous.push_back(slot_exo);
        trace.full_arrivals.push_back(slot_arr);
        trace.full_departures.push_back(slot_dep);
        trace.full_delivered.push_back(delivered);
        trace.full_attempts.push_back(slot_attempts);
        trace.full_opportunities.push_back(slot_opportunities);
        trace.full_nonempty.push_back(slot_nonempty);
    }
    record_decades_and_samples(t, delivered);
}

void Recorder::finish(const Net& net, double horizon,
                      const std::vector<std::int64_t>& delivered,
                      const std::vector<std::int64_t>& arrivals,
                      const std::vector<std::int64_t>& departures) {
    trace.delivered = delivered;
    trace.arrivals = arrivals;
    trace.departures = departures;
    for (int u = 0; u < num_nodes; ++u)
        trace.final_backlog[u] = static_cast<std::int64_t>(net.queue[u].size());
    double omf = trace.opportunities > 0.0
                     ? trace.nonempty_opportunities / trace.opportunities
                     : 0.0;
    if (trace.decades.empty() || trace.decades.back().horizon != horizon)
        trace.decades.push_back({horizon, omf});
}

}  // namespace internal

SimTrace run(const contention::Topology& topo,
             const contention::ContentionGraph& graph, const SimConfig& cfg) {
    cfg.validate(topo);
    internal::Net net(topo, graph, cfg);
    if (cfg.mac == mmtp::MacKind::csma) return internal::run_csma(net);
    return internal::run_slotted(net);
}

std::vector<DecadePoint> empty_fraction(const SimTrace& trace) {
    if (trace.horizon <= 0.0)
        throw std::invalid_argument("empty_fraction needs a populated trace");
    return trace.decades;
}

double capacity_search(const contention::Topology& topo,
                       const contention::ContentionGraph& graph,
                       SimConfig base, double horizon, double backlog_cap) {
    if (!(horizon >= 1.0) || !(backlog_cap > 0.0))
        throw std::invalid_argument("capacity_search needs horizon, cap > 0");
    base.arrivals = ArrivalKind::fluid;
    base.horizon = horizon;
    base.backlog_cap = backlog_cap;
    base.record_full = false;
    base.sample_times.clear();
    double lo = 0.0, hi = base.rate;
    for (int it = 0; it < 12; ++it) {
        double mid = 0.5 * (lo + hi);
        base.lambda = mid;
        SimTrace trace = run(topo, graph, base);
        if (trace.cap_exceeded)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

TightenedFactorReport tightened_factor_report(const SimTrace& trace, double h,
                                              double x, double l, double c) {
    if (!(h > 0.0) || !(x > 0.0) || !(l > 0.0) || !(c > 0.0))
        throw std::invalid_argument("calculus constants must be positive");
    TightenedFactorReport rep;
    rep.num_nodes = trace.num_nodes;
    rep.one_minus_f = trace.opportunities > 0.0
                          ? trace.nonempty_opportunities / trace.opportunities
                          : 0.0;
    const double n = static_cast<double>(trace.num_nodes);
    rep.upper_untightened = x / (n * h);
    rep.upper_tightened = rep.one_minus_f * x / (n * h);
    rep.lower_cap_untightened = c / l;
    if (rep.one_minus_f > 0.0) {
        rep.lower_factor = 1.0 / rep.one_minus_f;
        rep.lower_cap_tightened = c / (l * rep.one_minus_f);
    } else {
        rep.lower_factor_infinite = true;
    }
    return rep;
}

std::string SimTrace::to_csv() const {
    if (full_backlog.empty())
        throw std::logic_error("trace csv needs record_full");
    csv::Writer w({"t", "node", "backlog", "delivered", "nonempty_fraction"});
    std::vector<std::int64_t> sent(num_nodes, 0);
    double opp = 0.0, nonempty = 0.0;
    const std::size_t slots = full_departures.size();
    for (std::size_t t = 0; t <= slots; ++t) {
        if (t > 0) {
            opp += full_opportunities[t - 1];
            nonempty += full_nonempty[t - 1];
            for (int u = 0; u < num_nodes; ++u)
                sent[u] += full_departures[t - 1][u];
        }
        double omf = opp > 0.0 ? nonempty / opp : 0.0;
        for (int u = 0; u < num_nodes; ++u) {
            w.cell(static_cast<double>(t))
                .cell(u)
                .cell(full_backlog[t][u])
                .cell(sent[u])
                .cell(omf);
            w.end_row();
        }
    }
    return w.str();
}

}  // namespace tncap::sim
