#include "versus/pipeline/majority.hpp"

#include <algorithm>
#include <set>

namespace versus {

MajorityFilterResult apply_majority_filter(const std::vector<ValueEntry>& entries,
                                           const std::vector<std::pair<int, int>>& conflicts,
                                           double threshold) {
    MajorityFilterResult result;
    const int n = static_cast<int>(entries.size());

    std::set<std::pair<int, int>> conflict_set;
    for (auto [i, j] : conflicts) {
        if (i >= 0 && j >= 0 && i < n && j < n && i != j)
            conflict_set.insert({std::min(i, j), std::max(i, j)});
    }

    // Factions of mutually non-conflicting entries, greedy in input order.
    std::vector<std::vector<int>> factions;
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (auto& faction : factions) {
            bool compatible = std::none_of(faction.begin(), faction.end(), [&](int member) {
                return conflict_set.count({std::min(member, i), std::max(member, i)}) > 0;
            });
            if (compatible) {
                faction.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) factions.push_back({i});
    }

    auto faction_support = [&](const std::vector<int>& faction) {
        int total = 0;
        for (int idx : faction) total += entries[idx].support_count;
        return total;
    };

    std::size_t majority = 0;
    for (std::size_t f = 1; f < factions.size(); ++f) {
        if (faction_support(factions[f]) > faction_support(factions[majority])) majority = f;
    }

    auto conflicts_with_majority = [&](const std::vector<int>& faction) {
        for (int idx : faction) {
            for (int m : factions[majority]) {
                if (conflict_set.count({std::min(idx, m), std::max(idx, m)})) return true;
            }
        }
        return false;
    };

    std::vector<bool> keep(static_cast<std::size_t>(n), true);
    for (std::size_t f = 0; f < factions.size(); ++f) {
        if (f == majority || !conflicts_with_majority(factions[f])) continue;
        double major = faction_support(factions[majority]);
        double minor = faction_support(factions[f]);
        if (major / (major + minor) > threshold) {
            for (int idx : factions[f]) keep[static_cast<std::size_t>(idx)] = false;
        } else {
            result.unresolved_tie = true;
        }
    }

    for (int i = 0; i < n; ++i) {
        (keep[static_cast<std::size_t>(i)] ? result.kept : result.dropped).push_back(entries[i]);
    }
    return result;
}

}  // namespace versus
