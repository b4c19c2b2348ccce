#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tncap/contention.hpp"
#include "tncap/mmtp.hpp"
#include "tncap/schedule.hpp"

namespace tncap::sim {

enum class ArrivalKind { saturated, fluid, bernoulli };
enum class EmptyPolicy { hold, skip };

// One simulation run. Slotted MACs (aloha, centralized) step integer slots;
// csma runs an event calendar in continuous time with metrics reported at
// integer times. `hold` lets a link granted the channel occupy it even with
// an empty buffer (matching the modulated-service semantics); `skip` keeps
// empty links out of contention.
struct SimConfig {
    mmtp::MacKind mac = mmtp::MacKind::aloha;
    double p = 0.2;                  // aloha transmit probability
    CentralizedSchedule schedule;    // centralized
    double nu = 0.1, mu = 0.1;       // csma backoff / transmission rates
    ArrivalKind arrivals = ArrivalKind::fluid;
    double lambda = 0.0;             // packets per slot per source
    double horizon = 1000.0;         // integer slots / time units
    std::uint64_t seed = 1;
    double rate = 1.0;               // C
    EmptyPolicy empty_policy = EmptyPolicy::hold;
    double backlog_cap = std::numeric_limits<double>::infinity();
    bool record_full = false;        // per-slot per-node series
    std::vector<double> sample_times;  // integer times for D(t) checkpoints

    void validate(const contention::Topology& topo) const;
};

struct DecadePoint {
    double horizon = 0.0;
    double one_minus_f = 0.0;
    bool operator==(const DecadePoint&) const = default;
};

struct SimTrace {
    double horizon = 0.0;
    int num_nodes = 0;
    int num_flows = 0;

    std::vector<std::int64_t> delivered;      // [flow], at the horizon
    std::vector<std::int64_t> arrivals;       // [node], packets into buffer
    std::vector<std::int64_t> departures;     // [node], packets out of buffer
    std::vector<std::int64_t> final_backlog;  // [node]

    std::vector<double> sample_times;
    std::vector<std::vector<std::int64_t>> delivered_at;  // [sample][flow]

    // Transmission opportunities and the share with a nonempty buffer
    // (time-weighted for csma). decades holds the cumulative 1-f at each
    // power of ten and at the horizon.
    double opportunities = 0.0;
    double nonempty_opportunities = 0.0;
    std::vector<DecadePoint> decades;

    double max_total_backlog = 0.0;
    bool cap_exceeded = false;

    // csma only: time share per independent set of transmitting links.
    std::vector<std::pair<std::vector<int>, double>> state_occupancy;

    // Per-slot series, only when record_full is set. Row t covers slot t
    // (csma: the unit interval ending at t); full_backlog row 0 is the
    // initial state.
    std::vector<std::vector<std::int64_t>> full_backlog;     // [t][node]
    std::vector<std::vector<std::int64_t>> full_exogenous;   // [t][node]
    std::vector<std::vector<std::int64_t>> full_arrivals;    // [t][node]
    std::vector<std::vector<std::int64_t>> full_departures;  // [t][node]
    std::vector<std::vector<std::int64_t>> full_delivered;   // [t][flow], cum
    std::vector<std::vector<int>> full_attempts;  // [t] links (slotted only)
    std::vector<double> full_opportunities;       // [t]
    std::vector<double> full_nonempty;            // [t]

    bool operator==(const SimTrace&) const = default;

    // t,node,backlog,delivered,nonempty_fraction; needs record_full.
    std::string to_csv() const;
};

SimTrace run(const contention::Topology& topo,
             const contention::ContentionGraph& graph, const SimConfig& cfg);

// Cumulative 1-f(n,T) per decade (and at the horizon).
std::vector<DecadePoint> empty_fraction(const SimTrace& trace);

// Bisection on the per-source arrival rate over [0, C], 12 iterations,
// deterministic fluid arrivals: a rate is feasible when the total network
// backlog stays below `backlog_cap` throughout [0, horizon].
double capacity_search(const contention::Topology& topo,
                       const contention::ContentionGraph& graph,
                       SimConfig base, double horizon, double backlog_cap);

// Classical capacity-calculus factors tightened by the measured share of
// nonempty buffers: n lambda h <= (1-f) x and lambda l (1-f) <= c.
struct TightenedFactorReport {
    double one_minus_f = 0.0;
    int num_nodes = 0;
    double upper_untightened = 0.0;  // x / (n h)
    double upper_tightened = 0.0;    // (1-f) x / (n h)
    double lower_factor = 0.0;       // 1 / (1-f)
    bool lower_factor_infinite = false;
    double lower_cap_untightened = 0.0;  // c / l
    double lower_cap_tightened = 0.0;    // c / (l (1-f))
};
TightenedFactorReport tightened_factor_report(const SimTrace& trace, double h,
                                              double x, double l, double c);

}  // namespace tncap::sim
