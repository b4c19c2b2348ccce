#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tncap/schedule.hpp"

namespace tncap::minplus {

// Cumulative packet-count process on integer slots: A(0) = 0, nondecreasing.
// The saturated variant is the impulse input (A(t) unbounded for t >= 1) and
// is a distinct state, not a sentinel value stored in the table.
class CumulativeProcess {
  public:
    static CumulativeProcess from_values(std::vector<double> values);
    static CumulativeProcess from_increments(const std::vector<double>& incr);
    static CumulativeProcess saturated();

    bool is_saturated() const { return saturated_; }
    // Largest stored slot; unbounded for the saturated variant.
    std::size_t horizon() const;
    double at(std::size_t t) const;

  private:
    CumulativeProcess() = default;
    bool saturated_ = false;
    std::vector<double> values_;
};

// Bivariate service table S(s,t) on 0 <= s <= t <= horizon, stored as a
// lower triangle. S(t,t) = 0 and entries are nonnegative packet counts.
class ImpulseResponse {
  public:
    explicit ImpulseResponse(std::size_t horizon);
    // S(s,t) = sum of per-slot service over (s,t]; horizon = incr.size().
    static ImpulseResponse from_increments(const std::vector<double>& incr);

    std::size_t horizon() const { return horizon_; }
    double at(std::size_t s, std::size_t t) const;
    void set(std::size_t s, std::size_t t, double value);

    bool operator==(const ImpulseResponse&) const = default;

    // Columns s,t,value over the whole triangle (debugging aid).
    std::string to_csv() const;

  private:
    std::size_t index(std::size_t s, std::size_t t) const;
    std::size_t horizon_ = 0;
    std::vector<double> table_;
};

// (A * S)(t) = min_{0<=s<=t} { A(s) + S(s,t) }.
double convolve(const CumulativeProcess& a, const ImpulseResponse& s,
                std::size_t t);

// (S1 * S2)(s,t) = min_{s<=u<=t} { S1(s,u) + S2(u,t) }; associative.
ImpulseResponse compose(const ImpulseResponse& s1, const ImpulseResponse& s2);

// Deterministic service table of one link under a periodic schedule:
// S(s,t) = rate * |{ u in (max(s, causality_offset), t] : link in slot u }|.
// The offset clamps the count's lower end to the link's position on the path
// (hop index - 1), which is what makes the composed end-to-end table satisfy
// the causality checks. Negative offset means "use the link index".
ImpulseResponse centralized_impulse(const CentralizedSchedule& schedule,
                                    int link, double rate, std::size_t horizon,
                                    std::ptrdiff_t causality_offset = -1);

}  // namespace tncap::minplus
