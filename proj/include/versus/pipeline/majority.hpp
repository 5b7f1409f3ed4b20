#pragma once

#include <utility>
#include <vector>

#include "versus/core/types.hpp"

namespace versus {

struct MajorityFilterResult {
    std::vector<ValueEntry> kept;
    std::vector<ValueEntry> dropped;
    bool unresolved_tie = false;  // a conflicting pair survived on equal support
};

// Majority-opinion filter over one entity's value entries. `conflicts` holds
// index pairs (into entries) that contradict each other. Entries are grouped
// into factions of mutually non-conflicting entries; a faction that conflicts
// with the strongest faction is dropped when the strongest holds strictly
// more than `threshold` of their combined support, otherwise both stay and
// the tie is flagged (the inconsistent-values critique picks it up).
MajorityFilterResult apply_majority_filter(const std::vector<ValueEntry>& entries,
                                           const std::vector<std::pair<int, int>>& conflicts,
                                           double threshold);

}  // namespace versus
