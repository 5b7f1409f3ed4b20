#pragma once

#include <cstdint>
#include <string>

namespace versus {

enum class StageTag {
    EXTRACT,
    ATTRIBUTE_MERGE,
    VALUE_MERGE,
    CONTRAST,
    USEFULNESS,
    CRITIQUE,
    REVISE,
    AUTORATE,
};

const char* to_string(StageTag tag);
StageTag stage_tag_from_string(const std::string& s);

struct CompletionRequest {
    StageTag stage_tag = StageTag::EXTRACT;
    std::string prompt;
    double temperature = 0.0;  // AUTORATE must stay at 0
    int max_output_tokens = 1024;
};

struct CompletionResult {
    std::string text;
    std::int64_t latency_ms = 0;
    std::string backend_id;
};

}  // namespace versus
