#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versus/gateway/stage.hpp"

namespace versus {

// One stage invocation. input_text/output_text keep the payload and the
// (post-revision) structured output so runs can be audited and exported as
// training data.
struct StageTrace {
    std::string id;
    StageTag stage = StageTag::EXTRACT;
    std::string input_digest;
    std::string output_digest;
    std::vector<std::string> critiques_applied;
    std::int64_t duration_ms = 0;
    std::string input_text;
    std::string output_text;

    nlohmann::json to_json() const;
    static StageTrace from_json(const nlohmann::json& j);
};

class TraceLog {
  public:
    // Returns the trace id assigned to this entry.
    std::string append(StageTag stage, const std::string& input_text,
                       const std::string& output_text, std::int64_t duration_ms);
    void warn(std::string message);

    // Replaces the recorded output of trace `id` (used after revisions so the
    // trace and any exported example carry the revised output).
    void update_output(const std::string& id, const std::string& output_text);
    void add_critique(const std::string& id, const std::string& description);

    const std::vector<StageTrace>& entries() const { return entries_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::vector<std::string> ids() const;

  private:
    std::vector<StageTrace> entries_;
    std::vector<std::string> warnings_;
};

}  // namespace versus
