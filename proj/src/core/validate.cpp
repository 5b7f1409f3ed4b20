#include "versus/core/validate.hpp"

#include <map>
#include <set>
#include <sstream>

#include "versus/core/normalize.hpp"

namespace versus {

namespace {

std::string row_ref(std::size_t row_idx, const std::string& attribute) {
    std::ostringstream out;
    out << "row " << row_idx << " (" << attribute << ")";
    return out.str();
}

void check_cell(const std::vector<ValueEntry>& cell, char side, std::size_t row_idx,
                const std::string& attribute, const std::map<std::string, std::string>& doc_texts,
                std::vector<Violation>& out) {
    for (std::size_t vi = 0; vi < cell.size(); ++vi) {
        const ValueEntry& entry = cell[vi];
        std::string where = row_ref(row_idx, attribute) + " cell " + side + " value " +
                            std::to_string(vi);
        if (trim(entry.value).empty())
            out.push_back({"empty_value", where + ": value empty after trimming"});
        if (entry.support_count < 1)
            out.push_back({"support_count", where + ": support_count < 1"});
        if (entry.source_urls.empty())
            out.push_back({"attribution", where + ": no source URLs"});
        if (entry.source_urls.size() != entry.evidence_spans.size())
            out.push_back({"attribution",
                           where + ": source_urls and evidence_spans lengths differ"});

        bool value_backed = false;
        for (std::size_t si = 0; si < entry.evidence_spans.size(); ++si) {
            const std::string& span = entry.evidence_spans[si];
            const std::string* doc_text = nullptr;
            if (si < entry.source_urls.size()) {
                auto it = doc_texts.find(entry.source_urls[si]);
                if (it == doc_texts.end()) {
                    out.push_back({"attribution", where + ": cited url not in corpus: " +
                                                      entry.source_urls[si]});
                } else {
                    doc_text = &it->second;
                }
            }
            if (doc_text && !contains_nfc(*doc_text, span))
                out.push_back({"extractiveness",
                               where + ": evidence not a substring of cited document"});
            if (doc_text && contains_nfc(span, entry.value) && contains_nfc(*doc_text, span))
                value_backed = true;
        }
        if (!entry.evidence_spans.empty() && !value_backed)
            out.push_back({"extractiveness",
                           where + ": value not a substring of any of its evidence spans"});
    }
}

}  // namespace

std::vector<Violation> validate_summary(const ComparisonSummary& summary,
                                        const std::vector<SourceDocument>& corpus) {
    std::vector<Violation> out;

    if (trim(summary.entity_a.display_name).empty())
        out.push_back({"entity", "entity_a display_name empty"});
    if (trim(summary.entity_b.display_name).empty())
        out.push_back({"entity", "entity_b display_name empty"});
    if (!summary.entity_a.id.empty() && summary.entity_a.id == summary.entity_b.id)
        out.push_back({"entity", "entity ids not unique"});

    std::map<std::string, std::string> doc_texts;
    for (const auto& doc : corpus) doc_texts.emplace(doc.url, doc.raw_text);

    std::set<std::string> seen_attributes;
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        const ComparisonRow& row = summary.rows[i];
        if (trim(row.attribute).empty())
            out.push_back({"empty_attribute", row_ref(i, row.attribute) + ": attribute empty"});
        if (row.cell_a.empty() && row.cell_b.empty())
            out.push_back({"empty_row", row_ref(i, row.attribute) + ": both cells empty"});
        if (row.importance < 0.0)
            out.push_back({"range", row_ref(i, row.attribute) + ": importance negative"});
        if (row.rank_score < 0.0)
            out.push_back({"range", row_ref(i, row.attribute) + ": rank_score negative"});

        std::string key = norm_key(row.attribute);
        if (!seen_attributes.insert(key).second)
            out.push_back({"duplicate_attribute",
                           row_ref(i, row.attribute) + ": canonical attribute repeated"});

        if (i > 0 && summary.rows[i - 1].rank_score < row.rank_score)
            out.push_back({"rank_order",
                           row_ref(i, row.attribute) + ": rank_score above preceding row"});

        check_cell(row.cell_a, 'A', i, row.attribute, doc_texts, out);
        check_cell(row.cell_b, 'B', i, row.attribute, doc_texts, out);
    }
    return out;
}

}  // namespace versus
