#include "versus/eval/metrics.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

#include "versus/core/errors.hpp"
#include "versus/core/normalize.hpp"
#include "versus/gateway/payload.hpp"
#include "versus/ingest/tokenizer.hpp"
#include "versus/lang/lexicon.hpp"

namespace versus {

const char* to_string(RowRating r) {
    switch (r) {
        case RowRating::YES: return "YES";
        case RowRating::NO_BAD_EXTRACTION: return "NO_BAD_EXTRACTION";
        case RowRating::NO_INCONSISTENT_VALUES: return "NO_INCONSISTENT_VALUES";
        case RowRating::NO_UNDERMERGED_VALUES: return "NO_UNDERMERGED_VALUES";
        case RowRating::NO_ORTHOGONAL_VALUES: return "NO_ORTHOGONAL_VALUES";
        case RowRating::OK: return "OK";
    }
    return "OK";
}

std::optional<RowRating> row_rating_from_string(const std::string& s) {
    static const std::map<std::string, RowRating> table = {
        {"YES", RowRating::YES},
        {"NO_BAD_EXTRACTION", RowRating::NO_BAD_EXTRACTION},
        {"NO_INCONSISTENT_VALUES", RowRating::NO_INCONSISTENT_VALUES},
        {"NO_UNDERMERGED_VALUES", RowRating::NO_UNDERMERGED_VALUES},
        {"NO_ORTHOGONAL_VALUES", RowRating::NO_ORTHOGONAL_VALUES},
        {"OK", RowRating::OK},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

RatedRow chs_rate_row(Gateway& gateway, const PromptLibrary& prompts, const ComparisonRow& row,
                      const Entity& entity_a, const Entity& entity_b) {
    AutoratePayload payload;
    payload.entity_a = entity_a.display_name;
    payload.entity_b = entity_b.display_name;
    payload.attribute = row.attribute;
    payload.contrast_level = row.contrast_level;
    for (const auto& e : row.cell_a)
        payload.values.push_back(RatedValue{
            'A', e.value, e.evidence_spans.empty() ? "" : e.evidence_spans.front()});
    for (const auto& e : row.cell_b)
        payload.values.push_back(RatedValue{
            'B', e.value, e.evidence_spans.empty() ? "" : e.evidence_spans.front()});

    CompletionRequest request;
    request.stage_tag = StageTag::AUTORATE;
    request.temperature = 0.0;  // autoraters always run cold
    request.prompt = prompts.render(StageTag::AUTORATE, {{"PAYLOAD", render_payload(payload)}});
    int prompt_tokens = default_tokenizer().count_tokens(request.prompt);
    request.max_output_tokens = std::max(16, gateway.context_window() - prompt_tokens);

    const auto& rating = std::get<RatingResult>(gateway.complete_parsed(request));
    auto parsed = row_rating_from_string(rating.label);
    if (!parsed) throw ParseError("autorater returned unknown label: " + rating.label, rating.label);
    return RatedRow{*parsed, gateway.backend_id()};
}

ClusterOracle default_cluster_oracle() {
    return [](const std::vector<std::string>& attributes) {
        std::set<std::string> keys;
        for (const auto& a : attributes) keys.insert(lex::attribute_merge_key(a));
        return static_cast<int>(keys.size());
    };
}

double redundancy(const std::vector<std::string>& attributes, const ClusterOracle& oracle) {
    if (attributes.empty()) return 0.0;
    int clusters = oracle(attributes);
    return 1.0 - static_cast<double>(clusters) / static_cast<double>(attributes.size());
}

double redundancy(const ComparisonSummary& summary, const ClusterOracle& oracle) {
    std::vector<std::string> attributes;
    for (const auto& row : summary.rows) attributes.push_back(row.attribute);
    return redundancy(attributes, oracle);
}

CompatOracle default_compat_oracle() {
    return [](const std::string& a, const std::string& b) { return !lex::values_conflict(a, b); };
}

namespace {

constexpr int kExhaustiveLimit = 20;

int max_compatible_subset_exact(const std::vector<std::string>& values,
                                const CompatOracle& compat) {
    const int n = static_cast<int>(values.size());
    std::vector<std::uint32_t> conflict(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!compat(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)])) {
                conflict[static_cast<std::size_t>(i)] |= 1u << j;
                conflict[static_cast<std::size_t>(j)] |= 1u << i;
            }
        }
    }
    int best = 0;
    const std::uint32_t limit = n >= 31 ? 0x7FFFFFFFu : (1u << n) - 1;
    for (std::uint32_t mask = 0; mask <= limit; ++mask) {
        int size = std::popcount(mask);
        if (size <= best) continue;
        bool ok = true;
        for (std::uint32_t rest = mask; rest && ok;) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            if (conflict[static_cast<std::size_t>(i)] & mask) ok = false;
        }
        if (ok) best = size;
        if (mask == limit) break;  // avoid overflow wrap at 2^32-1
    }
    return best;
}

int max_compatible_subset_greedy(const std::vector<std::string>& values,
                                 const CompatOracle& compat) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < values.size(); ++i) {
        bool ok = std::all_of(kept.begin(), kept.end(),
                              [&](std::size_t j) { return compat(values[j], values[i]); });
        if (ok) kept.push_back(i);
    }
    return static_cast<int>(kept.size());
}

}  // namespace

int inconsistency_count(const std::vector<std::string>& values, const CompatOracle& compat,
                        bool* used_greedy) {
    if (used_greedy) *used_greedy = false;
    if (values.empty()) return 0;
    const int n = static_cast<int>(values.size());
    if (n <= kExhaustiveLimit) return n - max_compatible_subset_exact(values, compat);
    if (used_greedy) *used_greedy = true;
    return n - max_compatible_subset_greedy(values, compat);
}

int summary_inconsistency(const ComparisonSummary& summary, const CompatOracle& compat) {
    int total = 0;
    for (const auto& row : summary.rows) {
        for (const auto* cell : {&row.cell_a, &row.cell_b}) {
            std::vector<std::string> values;
            for (const auto& e : *cell) values.push_back(e.value);
            total += inconsistency_count(values, compat);
        }
    }
    return total;
}

double ranking_precision_at_k(const std::vector<bool>& useful_by_rank, int k) {
    if (useful_by_rank.empty() || k <= 0) return 0.0;
    int top = std::min<int>(k, static_cast<int>(useful_by_rank.size()));
    int useful = 0;
    for (int i = 0; i < top; ++i) {
        if (useful_by_rank[static_cast<std::size_t>(i)]) ++useful;
    }
    return static_cast<double>(useful) / static_cast<double>(top);
}

RowRating majority_opinion(const std::vector<RowRating>& ratings) {
    if (ratings.empty()) throw std::invalid_argument("majority_opinion: no ratings");
    std::map<RowRating, int> counts;
    for (RowRating r : ratings) ++counts[r];
    int best = 0;
    for (const auto& [r, c] : counts) best = std::max(best, c);

    std::vector<RowRating> tied;
    for (const auto& [r, c] : counts) {
        if (c == best) tied.push_back(r);
    }
    if (tied.size() == 1) return tied.front();
    // conservative tie-break: a NO label wins; then lexicographic
    std::vector<RowRating> pool;
    for (RowRating r : tied)
        if (is_no_rating(r)) pool.push_back(r);
    if (pool.empty()) pool = tied;
    return *std::min_element(pool.begin(), pool.end(), [](RowRating a, RowRating b) {
        return std::string(to_string(a)) < std::string(to_string(b));
    });
}

namespace {

bool rating_useful(RowRating r, bool count_ok_as_useful) {
    return r == RowRating::YES || (count_ok_as_useful && r == RowRating::OK);
}

void require_same_rows(const std::map<int, RowRating>& x, const std::map<int, RowRating>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("agreement: row index sets differ in size");
    for (const auto& [row, _] : x) {
        if (!y.count(row)) throw std::invalid_argument("agreement: row index sets differ");
    }
    if (x.empty()) throw std::invalid_argument("agreement: empty rating sets");
}

}  // namespace

double agreement(const std::map<int, RowRating>& x, const std::map<int, RowRating>& y,
                 bool count_ok_as_useful) {
    require_same_rows(x, y);
    int match = 0;
    for (const auto& [row, rx] : x) {
        if (rating_useful(rx, count_ok_as_useful) ==
            rating_useful(y.at(row), count_ok_as_useful))
            ++match;
    }
    return static_cast<double>(match) / static_cast<double>(x.size());
}

double agreement_exact(const std::map<int, RowRating>& x, const std::map<int, RowRating>& y) {
    require_same_rows(x, y);
    int match = 0;
    for (const auto& [row, rx] : x) {
        if (rx == y.at(row)) ++match;
    }
    return static_cast<double>(match) / static_cast<double>(x.size());
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < row_ratings.size(); ++i) {
        rows.push_back({{"row_index", i},
                        {"label", std::string(to_string(row_ratings[i].rating))},
                        {"rater_id", row_ratings[i].rater_id}});
    }
    nlohmann::json j{
        {"pct_rows_useful", pct_rows_useful},
        {"redundancy", redundancy},
        {"inconsistency_count", inconsistency_count},
        {"precision_at_k", precision_at_k},
        {"k", k},
        {"row_ratings", rows},
    };
    nlohmann::json ag{{"n_rows", agreement.n_rows}};
    if (agreement.human_human_defined) ag["human_human"] = agreement.human_human;
    if (agreement.human_autorater_defined) ag["human_autorater"] = agreement.human_autorater;
    j["agreement"] = ag;
    return j;
}

RatingsTable load_ratings_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("ratings file not found: " + path);
    RatingsTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("summary_id", 0) == 0) continue;  // header
        }
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 4)
            throw ConfigError("malformed ratings row (want 4 columns): " + line);
        int row_index = 0;
        try {
            row_index = std::stoi(fields[1]);
        } catch (...) {
            throw ConfigError("malformed row_index in ratings row: " + line);
        }
        auto rating = row_rating_from_string(trim(fields[3]));
        if (!rating) throw ConfigError("unknown rating label: " + fields[3]);
        table[trim(fields[2])][row_index] = *rating;
    }
    return table;
}

EvalReport evaluate_summary(Gateway& gateway, const PromptLibrary& prompts,
                            const ComparisonSummary& summary, int k, bool count_ok_as_useful,
                            const RatingsTable* human_ratings) {
    EvalReport report;
    report.k = k;

    std::map<int, RowRating> auto_ratings;
    std::vector<bool> useful_by_rank;
    int useful = 0;
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        RatedRow rated =
            chs_rate_row(gateway, prompts, summary.rows[i], summary.entity_a, summary.entity_b);
        report.row_ratings.push_back(rated);
        auto_ratings[static_cast<int>(i)] = rated.rating;
        bool u = rating_useful(rated.rating, count_ok_as_useful);
        useful_by_rank.push_back(u);
        if (rated.rating == RowRating::YES) ++useful;
    }
    report.pct_rows_useful =
        summary.rows.empty() ? 0.0
                             : static_cast<double>(useful) /
                                   static_cast<double>(summary.rows.size());
    report.redundancy = redundancy(summary, default_cluster_oracle());
    report.inconsistency_count = summary_inconsistency(summary, default_compat_oracle());
    report.precision_at_k = ranking_precision_at_k(useful_by_rank, k);

    if (human_ratings && !human_ratings->empty() && !summary.rows.empty()) {
        report.agreement.n_rows = static_cast<int>(summary.rows.size());
        std::vector<const std::map<int, RowRating>*> raters;
        for (const auto& [rater, rows] : *human_ratings) raters.push_back(&rows);

        if (raters.size() >= 2) {
            double total = 0.0;
            int pairs = 0;
            for (std::size_t i = 0; i < raters.size(); ++i) {
                for (std::size_t j = i + 1; j < raters.size(); ++j) {
                    total += agreement(*raters[i], *raters[j], count_ok_as_useful);
                    ++pairs;
                }
            }
            report.agreement.human_human = total / pairs;
            report.agreement.human_human_defined = true;
        }
        // majority human opinion vs the autorater
        std::map<int, RowRating> majority;
        for (const auto& [row, _] : *raters.front()) {
            std::vector<RowRating> votes;
            for (const auto* r : raters) {
                auto it = r->find(row);
                if (it != r->end()) votes.push_back(it->second);
            }
            if (!votes.empty()) majority[row] = majority_opinion(votes);
        }
        if (!majority.empty() && majority.size() == auto_ratings.size()) {
            report.agreement.human_autorater =
                agreement(majority, auto_ratings, count_ok_as_useful);
            report.agreement.human_autorater_defined = true;
        }
    }
    return report;
}

}  // namespace versus
