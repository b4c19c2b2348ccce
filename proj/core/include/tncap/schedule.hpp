#pragma once

#include <cstdint>
#include <vector>

namespace tncap {

// Transmission schedule for centralized scheduling. entries[i] is the set of
// links granted slot i+1. Slots past the last entry wrap back to cycle_start,
// so a one-off warm-up prefix (entries before cycle_start) can precede the
// steady cycle. The paper-style line schedule 1,2,3,(1,4),2,3,(1,4),... is
// entries {1},{2},{3},{1,4} with cycle_start 1.
struct CentralizedSchedule {
    std::vector<std::vector<int>> entries;
    std::size_t cycle_start = 0;

    static CentralizedSchedule cycle(std::vector<std::vector<int>> entries);
    // Single-link entries, optional warm-up prefix.
    static CentralizedSchedule of_links(std::vector<int> links,
                                        std::size_t cycle_start = 0);

    std::size_t period() const { return entries.size() - cycle_start; }
    bool empty() const { return entries.empty(); }

    // Entry index serving a 1-based slot.
    std::size_t position_of_slot(std::uint64_t slot) const;
    const std::vector<int>& at_slot(std::uint64_t slot) const;
    bool allows(int link, std::uint64_t slot) const;
    bool contains(int link) const;
    int max_link() const;

    void validate() const;  // throws model_error
};

}  // namespace tncap
