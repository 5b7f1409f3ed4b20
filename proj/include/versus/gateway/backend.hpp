#pragma once

#include <memory>
#include <string>

#include "versus/gateway/stage.hpp"

namespace versus {

class CompletionBackend {
  public:
    virtual ~CompletionBackend() = default;
    virtual CompletionResult complete(const CompletionRequest& request) = 0;
    virtual std::string id() const = 0;
};

// Rule-based offline backend: a pure function of (stage_tag, prompt). It
// parses the fenced payload out of the prompt and answers in the stage output
// grammar, using the bundled lexicon for its mock semantics:
//
//   EXTRACT         one record per sentence matching
//                   "The <attr> of <entity> is <value>." or
//                   "<entity>'s <attr> is <value>." (the entity mention may
//                   carry sibling suffix tokens, which later trips the
//                   wrong-entity critique)
//   ATTRIBUTE_MERGE groups attributes equal under the merge key
//                   (normalization + plural stripping + synonym table);
//                   center = shortest member, ties lexicographic
//   VALUE_MERGE     groups values equal under norm_key; conflicts from the
//                   lexicon conflict relation between group representatives
//   CONTRAST        HIGH iff the normalized value sets differ, else NONE;
//                   rank hint = total support
//   USEFULNESS      NO for stop-list attributes, else YES
//   CRITIQUE        the eight mechanical defect rules
//   REVISE          context re-extraction and claim splitting
//   AUTORATE        the six-label mock rater
std::unique_ptr<CompletionBackend> make_deterministic_backend();

}  // namespace versus
