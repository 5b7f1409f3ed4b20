#include "versus/pipeline/ranking.hpp"

#include <algorithm>
#include <set>

#include "versus/core/normalize.hpp"

namespace versus {

double popularity_importance(const ComparisonRow& row, const Corpus& corpus) {
    std::set<std::string> urls;
    for (const auto* cell : {&row.cell_a, &row.cell_b}) {
        for (const auto& entry : *cell) {
            for (const auto& url : entry.source_urls) urls.insert(url);
        }
    }
    double importance = 0.0;
    for (const auto& url : urls) {
        if (const SourceDocument* doc = corpus.find_document(url))
            importance += 1.0 / static_cast<double>(doc->search_rank);
    }
    return importance;
}

void score_and_sort_rows(std::vector<ComparisonRow>& rows, const Corpus& corpus,
                         const RankWeights& weights) {
    double max_importance = 0.0;
    for (auto& row : rows) {
        row.importance = popularity_importance(row, corpus);
        max_importance = std::max(max_importance, row.importance);
    }
    for (auto& row : rows) {
        double normalized = max_importance > 0.0 ? row.importance / max_importance : 0.0;
        row.rank_score =
            weights.contrast * contrast_score(row.contrast_level) + weights.popularity * normalized;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
        if (row_support(a) != row_support(b)) return row_support(a) > row_support(b);
        return norm_key(a.attribute) < norm_key(b.attribute);
    });
}

}  // namespace versus
