#include "versus/gateway/prompts.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "versus/core/errors.hpp"

namespace versus {

namespace {

// Built-in templates. The exemplars below are placeholders to tune per
// deployment; swap the whole file via --prompts-dir when prompting a live
// model.
const char* kExtractTemplate = R"(You extract attributes and their values from source sentences about one entity.
Work only with the sentences given; never invent text. VALUE and EVIDENCE must
be copied verbatim from a sentence, and VALUE must appear inside EVIDENCE.

Respond with one line per extraction, tab-separated:
ATTRIBUTE<TAB>VALUE<TAB>EVIDENCE
If nothing can be extracted, respond with the single line: NO_RECORDS

Example:
  input sentence: The battery life of PhoneA is 10 hours.
  output line:    battery life	10 hours	The battery life of PhoneA is 10 hours.

<<<
{{PAYLOAD}}
>>>
)";

const char* kAttributeMergeTemplate = R"(You merge near-duplicate attribute names into clusters so the final comparison
has one row per concept. Group attributes that mean the same thing (plural
forms, synonyms). Every input attribute must land in exactly one cluster.

Respond with one line per cluster:
CLUSTER<TAB>member<TAB>member...
Mark the cluster center (the best display name) with a leading *.

Example:
  input: room, rooms, price
  output:
  CLUSTER	*room	rooms
  CLUSTER	*price

<<<
{{PAYLOAD}}
>>>
)";

const char* kValueMergeTemplate = R"(You group the values extracted for one attribute into consistency groups per
entity: values that state the same thing belong together. Mark pairs of groups
that contradict each other.

Respond with:
GROUP<TAB>side<TAB>rep_index<TAB>member_indices (comma separated, 1-based)
CONFLICT<TAB>side<TAB>group_i,group_j   (groups numbered per side, in order)

Example:
  input values for A: 1 "good view", 2 "good view", 3 "bad view"
  output:
  GROUP	A	1	1,2
  GROUP	A	3	3
  CONFLICT	A	1,2

<<<
{{PAYLOAD}}
>>>
)";

const char* kContrastTemplate = R"(You label each attribute of an A-vs-B comparison by how strongly the two
entities' values differ: HIGH when they clearly differ, LOW when they differ
mildly, NONE when they agree. Also give an integer rank hint (higher = more
decision-relevant).

Respond with one line per attribute:
ROW<TAB>attribute<TAB>HIGH|LOW|NONE<TAB>rank_hint

<<<
{{PAYLOAD}}
>>>
)";

const char* kUsefulnessTemplate = R"(You judge whether one comparison row would help a person decide between
{{ENTITY_A}} and {{ENTITY_B}}. A row is useless when its attribute is trivially
true of everything in the category (wheels for a car) or irrelevant.

Respond with exactly one line: RATING: YES or RATING: NO

<<<
{{PAYLOAD}}
>>>
)";

const char* kCritiqueTemplate = R"(You review a stage output for the defect kinds listed below and report every
problem you find. Do not fix anything; only report.

Kinds (scope EXTRACT): INSUFFICIENT_CONTEXT, WRONG_ENTITY, UNHELPFUL_ATTRIBUTE_EXTRACT
Kinds (scope COMPARE): ORTHOGONAL_VALUES, INCONSISTENT_VALUES, UNHELPFUL_ATTRIBUTE_OR_VALUE, UNDER_OR_OVER_MERGED, LONG_COMPLEX_CLAIM

Targets: E<i> for extraction i; R<i> for row i; R<i>.<side><j> for value j of
row i; R<i>,R<j> for a row pair.

Respond with one line per finding:
CRITIQUE<TAB>KIND<TAB>TARGET<TAB>NOTE
or the single line: CRITIQUE: NONE

<<<
{{PAYLOAD}}
>>>
)";

const char* kReviseTemplate = R"(You fix one reported defect of kind {{KIND}} using only the source sentences
given in the payload. Produce replacement extractions; every VALUE and
EVIDENCE must be copied verbatim from a source sentence.

Respond with one line per replacement extraction:
ATTRIBUTE<TAB>VALUE<TAB>EVIDENCE
If the item should simply be dropped, respond with: NO_RECORDS

<<<
{{PAYLOAD}}
>>>
)";

const char* kAutorateTemplate = R"(You rate one row of an A-vs-B comparison table. Labels:
  YES                      attribute and values genuinely help the comparison
  NO_BAD_EXTRACTION        attribute or value makes no sense
  NO_INCONSISTENT_VALUES   contradictory values shown for one entity
  NO_UNDERMERGED_VALUES    redundant values that should have been merged
  NO_ORTHOGONAL_VALUES     the two entities' values talk past each other
  OK                       nothing wrong, but not helpful either

Respond with exactly one line: RATING: <LABEL>

<<<
{{PAYLOAD}}
>>>
)";

std::string template_filename(StageTag tag) {
    std::string name = to_string(tag);
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return name + ".txt";
}

}  // namespace

PromptLibrary PromptLibrary::embedded() {
    PromptLibrary lib;
    lib.templates_ = {
        {StageTag::EXTRACT, kExtractTemplate},
        {StageTag::ATTRIBUTE_MERGE, kAttributeMergeTemplate},
        {StageTag::VALUE_MERGE, kValueMergeTemplate},
        {StageTag::CONTRAST, kContrastTemplate},
        {StageTag::USEFULNESS, kUsefulnessTemplate},
        {StageTag::CRITIQUE, kCritiqueTemplate},
        {StageTag::REVISE, kReviseTemplate},
        {StageTag::AUTORATE, kAutorateTemplate},
    };
    return lib;
}

PromptLibrary PromptLibrary::from_dir(const std::filesystem::path& dir) {
    PromptLibrary lib = embedded();
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("prompt directory not found: " + dir.string());
    for (auto& [tag, text] : lib.templates_) {
        auto path = dir / template_filename(tag);
        std::ifstream in(path);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return lib;
}

std::string PromptLibrary::render(StageTag tag,
                                  const std::map<std::string, std::string>& vars) const {
    std::string out = raw_template(tag);
    for (const auto& [key, value] : vars) {
        const std::string placeholder = "{{" + key + "}}";
        std::size_t pos = 0;
        while ((pos = out.find(placeholder, pos)) != std::string::npos) {
            out.replace(pos, placeholder.size(), value);
            pos += value.size();
        }
    }
    return out;
}

const std::string& PromptLibrary::raw_template(StageTag tag) const {
    auto it = templates_.find(tag);
    if (it == templates_.end()) throw ConfigError("no template for stage");
    return it->second;
}

}  // namespace versus
