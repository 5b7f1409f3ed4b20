#pragma once

#include <string>
#include <vector>

#include "versus/core/types.hpp"

namespace versus {

// A detected invariant violation. Violations are data, not errors: callers
// decide whether a non-empty list is fatal.
struct Violation {
    std::string code;     // stable identifier, e.g. "extractiveness"
    std::string message;  // human-readable description with location

    bool operator==(const Violation&) const = default;
};

// Checks every structural invariant of a summary against its corpus:
// extractiveness of evidence and values, attribution (>= 1 source per value),
// canonical-attribute uniqueness, rank ordering, and field validity.
std::vector<Violation> validate_summary(const ComparisonSummary& summary,
                                        const std::vector<SourceDocument>& corpus);

}  // namespace versus
