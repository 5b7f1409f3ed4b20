#pragma once

#include <vector>

#include "versus/core/types.hpp"
#include "versus/ingest/corpus.hpp"
#include "versus/pipeline/config.hpp"

namespace versus {

inline double contrast_score(ContrastLevel level) {
    switch (level) {
        case ContrastLevel::HIGH: return 1.0;
        case ContrastLevel::LOW: return 0.5;
        case ContrastLevel::NONE: return 0.0;
    }
    return 0.0;
}

// Popularity signal: sum of 1/search_rank over the distinct documents
// supporting the row (both cells). Unknown urls contribute nothing.
double popularity_importance(const ComparisonRow& row, const Corpus& corpus);

// Fills importance and rank_score for every row and sorts rank_score desc,
// ties broken by total support desc, then attribute asc. rank_score =
// w_contrast * contrast_score + w_popularity * importance / max_importance.
void score_and_sort_rows(std::vector<ComparisonRow>& rows, const Corpus& corpus,
                         const RankWeights& weights);

}  // namespace versus
