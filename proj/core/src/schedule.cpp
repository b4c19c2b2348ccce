#include "tncap/schedule.hpp"

#include <algorithm>

#include "tncap/errors.hpp"

namespace tncap {

CentralizedSchedule CentralizedSchedule::cycle(
    std::vector<std::vector<int>> entries) {
    CentralizedSchedule s;
    s.entries = std::move(entries);
    s.cycle_start = 0;
    s.validate();
    return s;
}

CentralizedSchedule CentralizedSchedule::of_links(std::vector<int> links,
                                                  std::size_t cycle_start) {
    CentralizedSchedule s;
    s.entries.reserve(links.size());
    for (int l : links) s.entries.push_back({l});
    s.cycle_start = cycle_start;
    s.validate();
    return s;
}

std::size_t CentralizedSchedule::position_of_slot(std::uint64_t slot) const {
    const std::uint64_t idx = slot - 1;  // slots are 1-based
    if (idx < entries.size()) return static_cast<std::size_t>(idx);
    return cycle_start + static_cast<std::size_t>((idx - entries.size()) %
                                                  static_cast<std::uint64_t>(period()));
}

const std::vector<int>& CentralizedSchedule::at_slot(std::uint64_t slot) const {
    return entries[position_of_slot(slot)];
}

bool CentralizedSchedule::allows(int link, std::uint64_t slot) const {
    const auto& e = at_slot(slot);
    return std::find(e.begin(), e.end(), link) != e.end();
}

bool CentralizedSchedule::contains(int link) const {
    for (const auto& e : entries)
        if (std::find(e.begin(), e.end(), link) != e.end()) return true;
    return false;
}

int CentralizedSchedule::max_link() const {
    int m = -1;
    for (const auto& e : entries)
        for (int l : e) m = std::max(m, l);
    return m;
}

void CentralizedSchedule::validate() const {
    if (entries.empty()) throw model_error("schedule is empty");
    if (cycle_start >= entries.size())
        throw model_error("schedule cycle_start past the last entry");
    for (const auto& e : entries)
        for (int l : e)
            if (l < 0) throw model_error("schedule has a negative link index");
}

}  // namespace tncap
