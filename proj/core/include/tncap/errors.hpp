#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tncap {

// Malformed model input: bad schedule, absent link, broken topology.
struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Query outside a table's stored domain (horizon exceeded, index out of
// triangle).
struct range_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// State-space enumeration hit its cap; `reached` is the count at abort.
struct capacity_error : std::runtime_error {
    std::size_t reached;
    capacity_error(const std::string& what, std::size_t reached_count)
        : std::runtime_error(what), reached(reached_count) {}
};

// Numerical failure: singular solve, non-convergent iteration.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A source-destination pair has no path at the given range.
struct connectivity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tncap
