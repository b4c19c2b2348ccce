#include "tncap/mmtp.hpp"

#include <algorithm>
#include <stdexcept>

#include "tncap/errors.hpp"

namespace tncap::mmtp {

const char* mac_name(MacKind kind) {
    switch (kind) {
        case MacKind::centralized: return "centralized";
        case MacKind::aloha: return "aloha";
        case MacKind::csma: return "csma";
    }
    return "?";
}

std::size_t MacModel::state_count() const {
    switch (kind) {
        case MacKind::csma: return states.size();
        case MacKind::aloha: return 2;
        case MacKind::centralized: return schedule.entries.size();
    }
    return 0;
}

std::vector<int> MacModel::favorable(int which) const {
    std::vector<int> out;
    switch (kind) {
        case MacKind::csma:
            for (std::size_t i = 0; i < states.size(); ++i)
                if (std::binary_search(states[i].begin(), states[i].end(),
                                       which))
                    out.push_back(static_cast<int>(i));
            break;
        case MacKind::aloha:
            if (which != link)
                throw model_error("aloha model is defined per link");
            out.push_back(1);  // states are {off, on}
            break;
        case MacKind::centralized:
            for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
                const auto& e = schedule.entries[i];
                if (std::find(e.begin(), e.end(), which) != e.end())
                    out.push_back(static_cast<int>(i));
            }
            break;
    }
    return out;
}

MacModel aloha_model(const contention::ContentionGraph& g, int link, double p,
                     double rate) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("aloha: p must lie in (0,1)");
    if (link < 0 || link >= g.num_links())
        throw model_error("aloha: unknown link");
    MacModel m;
    m.kind = MacKind::aloha;
    m.rate = rate;
    m.link = link;
    double q = p;
    for (int d = 0; d < g.degree(link); ++d) q *= (1.0 - p);
    m.p_on = q;
    return m;
}

MacModel csma_model(const contention::ContentionGraph& g, double nu, double mu,
                    double rate, std::size_t max_states) {
    if (!(nu > 0.0) || !(mu > 0.0))
        throw std::invalid_argument("csma: nu and mu must be positive");
    MacModel m;
    m.kind = MacKind::csma;
    m.rate = rate;
    m.nu = nu;
    m.mu = mu;
    m.states = contention::independent_sets(g, max_states);
    const std::size_t n = m.states.size();
    m.generator = Matrix(n, n);

    auto state_index = [&](const std::vector<int>& s) {
        auto it = std::lower_bound(
            m.states.begin(), m.states.end(), s,
            [](const std::vector<int>& a, const std::vector<int>& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
            });
        return static_cast<std::size_t>(it - m.states.begin());
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = m.states[i];
        int additions = 0, removals = 0;
        // A silent link joins at rate nu if it conflicts with nothing active.
        for (int v = 0; v < g.num_links(); ++v) {
            if (std::binary_search(s.begin(), s.end(), v)) continue;
            bool blocked = false;
            for (int u : s)
                if (g.adjacent(u, v)) {
                    blocked = true;
                    break;
                }
            if (blocked) continue;
            std::vector<int> up = s;
            up.insert(std::lower_bound(up.begin(), up.end(), v), v);
            m.generator(i, state_index(up)) = nu;
            ++additions;
        }
        // An active link finishes at rate mu.
        for (int u : s) {
            std::vector<int> down;
            down.reserve(s.size() - 1);
            for (int w : s)
                if (w != u) down.push_back(w);
            m.generator(i, state_index(down)) = mu;
            ++removals;
        }
        m.generator(i, i) = -(additions * nu + removals * mu);
    }
    return m;
}

MacModel centralized_model(CentralizedSchedule schedule, double rate) {
    schedule.validate();
    MacModel m;
    m.kind = MacKind::centralized;
    m.rate = rate;
    m.schedule = std::move(schedule);
    return m;
}

StationaryDist stationary(const MacModel& m) {
    StationaryDist out;
    switch (m.kind) {
        case MacKind::aloha:
            out.probs = {1.0 - m.p_on, m.p_on};
            break;
        case MacKind::csma:
            out.probs = stationary_of_generator(m.generator);
            break;
        case MacKind::centralized: {
            // Uniform over the steady cycle; warm-up prefix entries are
            // visited once and carry no stationary mass.
            const std::size_t n = m.schedule.entries.size();
            out.probs.assign(n, 0.0);
            const double w = 1.0 / static_cast<double>(m.schedule.period());
            for (std::size_t i = m.schedule.cycle_start; i < n; ++i)
                out.probs[i] = w;
            break;
        }
    }
    return out;
}

double mean_service_rate(const MacModel& m, int link) {
    const auto pi = stationary(m).probs;
    double p = 0.0;
    for (int idx : m.favorable(link)) p += pi[idx];
    return m.rate * p;
}

}  // namespace tncap::mmtp
