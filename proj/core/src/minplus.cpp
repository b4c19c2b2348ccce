#include "tncap/minplus.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tncap/csv.hpp"
#include "tncap/errors.hpp"

namespace tncap::minplus {

CumulativeProcess CumulativeProcess::from_values(std::vector<double> values) {
    if (values.empty() || values[0] != 0.0)
        throw std::invalid_argument("cumulative process must start at 0");
    for (std::size_t t = 1; t < values.size(); ++t)
        if (values[t] < values[t - 1])
            throw std::invalid_argument("cumulative process must be nondecreasing");
    CumulativeProcess a;
    a.values_ = std::move(values);
    return a;
}

CumulativeProcess CumulativeProcess::from_increments(
    const std::vector<double>& incr) {
    std::vector<double> values(incr.size() + 1, 0.0);
    for (std::size_t t = 0; t < incr.size(); ++t) {
        if (incr[t] < 0.0)
            throw std::invalid_argument("negative arrival increment");
        values[t + 1] = values[t] + incr[t];
    }
    return from_values(std::move(values));
}

CumulativeProcess CumulativeProcess::saturated() {
    CumulativeProcess a;
    a.saturated_ = true;
    return a;
}

std::size_t CumulativeProcess::horizon() const {
    if (saturated_) return std::numeric_limits<std::size_t>::max();
    return values_.size() - 1;
}

double CumulativeProcess::at(std::size_t t) const {
    if (saturated_)
        throw range_error("saturated process has no stored values");
    if (t >= values_.size())
        throw range_error("cumulative process: slot beyond horizon");
    return values_[t];
}

ImpulseResponse::ImpulseResponse(std::size_t horizon)
    : horizon_(horizon), table_((horizon + 1) * (horizon + 2) / 2, 0.0) {}

ImpulseResponse ImpulseResponse::from_increments(
    const std::vector<double>& incr) {
    ImpulseResponse s(incr.size());
    for (std::size_t lo = 0; lo <= incr.size(); ++lo) {
        double acc = 0.0;
        for (std::size_t t = lo + 1; t <= incr.size(); ++t) {
            if (incr[t - 1] < 0.0)
                throw std::invalid_argument("negative service increment");
            acc += incr[t - 1];
            s.set(lo, t, acc);
        }
    }
    return s;
}

std::size_t ImpulseResponse::index(std::size_t s, std::size_t t) const {
    // Row t holds entries s = 0..t.
    return t * (t + 1) / 2 + s;
}

double ImpulseResponse::at(std::size_t s, std::size_t t) const {
    if (t > horizon_ || s > t)
        throw range_error("impulse response: (s,t) outside stored triangle");
    return table_[index(s, t)];
}

void ImpulseResponse::set(std::size_t s, std::size_t t, double value) {
    if (t > horizon_ || s > t)
        throw range_error("impulse response: (s,t) outside stored triangle");
    if (s == t && value != 0.0)
        throw std::invalid_argument("impulse response requires S(t,t) = 0");
    if (value < 0.0)
        throw std::invalid_argument("impulse response entries are nonnegative");
    table_[index(s, t)] = value;
}

std::string ImpulseResponse::to_csv() const {
    csv::Writer w({"s", "t", "value"});
    for (std::size_t t = 0; t <= horizon_; ++t)
        for (std::size_t s = 0; s <= t; ++s) {
            w.cell(static_cast<std::uint64_t>(s))
                .cell(static_cast<std::uint64_t>(t))
                .cell(at(s, t));
            w.end_row();
        }
    return w.str();
}

double convolve(const CumulativeProcess& a, const ImpulseResponse& s,
                std::size_t t) {
    if (t > s.horizon() || t > a.horizon())
        throw range_error("convolve: slot beyond an operand's horizon");
    if (a.is_saturated()) {
        // Only s = 0 contributes: A(0) = 0, everything later is unbounded.
        return s.at(0, t);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u <= t; ++u)
        best = std::min(best, a.at(u) + s.at(u, t));
    return best;
}

ImpulseResponse compose(const ImpulseResponse& s1, const ImpulseResponse& s2) {
    if (s1.horizon() != s2.horizon())
        throw range_error("compose: horizon mismatch");
    const std::size_t horizon = s1.horizon();
    ImpulseResponse out(horizon);
    for (std::size_t t = 0; t <= horizon; ++t)
        for (std::size_t s = 0; s <= t; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t u = s; u <= t; ++u)
                best = std::min(best, s1.at(s, u) + s2.at(u, t));
            if (s != t) out.set(s, t, best);
            // best at s == t is S1(t,t) + S2(t,t) = 0 already.
        }
    return out;
}

ImpulseResponse centralized_impulse(const CentralizedSchedule& schedule,
                                    int link, double rate, std::size_t horizon,
                                    std::ptrdiff_t causality_offset) {
    schedule.validate();
    if (!schedule.contains(link))
        throw model_error("centralized_impulse: link absent from schedule");
    if (rate < 0.0) throw std::invalid_argument("rate must be nonnegative");
    const std::size_t offset =
        causality_offset < 0 ? static_cast<std::size_t>(link)
                             : static_cast<std::size_t>(causality_offset);

    // Per-slot allocation indicator over 1..horizon.
    std::vector<double> incr(horizon, 0.0);
    for (std::size_t u = 1; u <= horizon; ++u)
        if (schedule.allows(link, u)) incr[u - 1] = rate;

    ImpulseResponse s(horizon);
    for (std::size_t lo = 0; lo <= horizon; ++lo) {
        double acc = 0.0;
        const std::size_t start = std::max(lo, offset);
        for (std::size_t t = start + 1; t <= horizon; ++t) {
            acc += incr[t - 1];
            if (lo < t) s.set(lo, t, acc);
        }
    }
    return s;
}

}  // namespace tncap::minplus
