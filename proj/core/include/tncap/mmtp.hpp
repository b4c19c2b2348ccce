#pragma once

#include <cstddef>
#include <vector>

#include "tncap/contention.hpp"
#include "tncap/matrix.hpp"
#include "tncap/schedule.hpp"

namespace tncap::mmtp {

enum class MacKind { centralized, aloha, csma };

const char* mac_name(MacKind kind);

// Modulating chain plus per-link favorable states and the transmission rate.
// The chain's shape depends on the MAC:
//   csma        - continuous-time chain over the independent sets of the
//                 contention graph (generator Q)
//   aloha       - per-link two-state slot chain {off, on} with i.i.d.
//                 increments, p_on = p (1-p)^degree
//   centralized - deterministic cycle over schedule positions
struct MacModel {
    MacKind kind = MacKind::aloha;
    double rate = 1.0;  // C, packets per slot / unit time in favorable states

    // csma
    std::vector<std::vector<int>> states;  // independent sets, size-then-lex
    Matrix generator;                      // Q, zero row sums
    double nu = 0.0, mu = 0.0;

    // aloha (defined per link)
    int link = -1;
    double p_on = 0.0;

    // centralized
    CentralizedSchedule schedule;

    std::size_t state_count() const;
    // State indices in which `link` transmits at rate C.
    std::vector<int> favorable(int link) const;
};

struct StationaryDist {
    std::vector<double> probs;
};

MacModel aloha_model(const contention::ContentionGraph& g, int link, double p,
                     double rate);

MacModel csma_model(const contention::ContentionGraph& g, double nu, double mu,
                    double rate, std::size_t max_states = 20000);

MacModel centralized_model(CentralizedSchedule schedule, double rate);

StationaryDist stationary(const MacModel& m);

// C * pi(favorable(link)): the long-run service rate of the link.
double mean_service_rate(const MacModel& m, int link);

}  // namespace tncap::mmtp
