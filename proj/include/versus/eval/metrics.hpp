#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versus/core/types.hpp"
#include "versus/gateway/gateway.hpp"
#include "versus/gateway/prompts.hpp"

namespace versus {

// Closed six-label set of the row-level helpfulness rater.
enum class RowRating {
    YES,
    NO_BAD_EXTRACTION,
    NO_INCONSISTENT_VALUES,
    NO_UNDERMERGED_VALUES,
    NO_ORTHOGONAL_VALUES,
    OK,
};

const char* to_string(RowRating r);
std::optional<RowRating> row_rating_from_string(const std::string& s);
inline bool is_no_rating(RowRating r) { return r != RowRating::YES && r != RowRating::OK; }

struct RatedRow {
    RowRating rating = RowRating::OK;
    std::string rater_id;
};

// Row-level helpfulness rating via the autorater (always temperature 0).
RatedRow chs_rate_row(Gateway& gateway, const PromptLibrary& prompts, const ComparisonRow& row,
                      const Entity& entity_a, const Entity& entity_b);

// Clustering oracle: number of clusters among the given attributes. The
// default uses the bundled normalization + synonym table.
using ClusterOracle = std::function<int(const std::vector<std::string>&)>;
ClusterOracle default_cluster_oracle();

// 1 - clusters/attributes; 0 for an empty summary.
double redundancy(const ComparisonSummary& summary, const ClusterOracle& oracle);
double redundancy(const std::vector<std::string>& attributes, const ClusterOracle& oracle);

// Pairwise value compatibility; default is the bundled conflict relation.
using CompatOracle = std::function<bool(const std::string&, const std::string&)>;
CompatOracle default_compat_oracle();

// |values| minus the largest pairwise-compatible subset. Exact (exhaustive)
// up to 20 values, greedy beyond with a warning flag.
int inconsistency_count(const std::vector<std::string>& values, const CompatOracle& compat,
                        bool* used_greedy = nullptr);

// Sum of per-cell inconsistency counts over a summary.
int summary_inconsistency(const ComparisonSummary& summary, const CompatOracle& compat);

// Useful-count among the top min(k, n) rows over min(k, n); 0 when empty.
double ranking_precision_at_k(const std::vector<bool>& useful_by_rank, int k = 5);

// Most frequent label; ties prefer a NO label, then lexicographic order.
RowRating majority_opinion(const std::vector<RowRating>& ratings);

// Fraction of rows with matching labels after collapsing to binary
// useful/not-useful. Throws on mismatched row index sets.
double agreement(const std::map<int, RowRating>& x, const std::map<int, RowRating>& y,
                 bool count_ok_as_useful = false);
// Same statistic without the binary collapse (exact label match).
double agreement_exact(const std::map<int, RowRating>& x, const std::map<int, RowRating>& y);

struct AgreementStats {
    double human_human = 0.0;
    double human_autorater = 0.0;
    int n_rows = 0;
    bool human_human_defined = false;      // needs >= 2 human raters
    bool human_autorater_defined = false;  // needs >= 1 human rater
};

struct EvalReport {
    double pct_rows_useful = 0.0;
    double redundancy = 0.0;
    int inconsistency_count = 0;
    double precision_at_k = 0.0;
    int k = 5;
    std::vector<RatedRow> row_ratings;
    AgreementStats agreement;

    nlohmann::json to_json() const;
};

// Ratings CSV: summary_id,row_index,rater_id,label (with header line).
using RatingsTable = std::map<std::string, std::map<int, RowRating>>;  // rater -> row -> label
RatingsTable load_ratings_csv(const std::string& path);

// Full summary evaluation: autorater ratings per row, the three summary-level
// metrics, and agreement stats against optional human ratings.
EvalReport evaluate_summary(Gateway& gateway, const PromptLibrary& prompts,
                            const ComparisonSummary& summary, int k = 5,
                            bool count_ok_as_useful = false,
                            const RatingsTable* human_ratings = nullptr);

}  // namespace versus
