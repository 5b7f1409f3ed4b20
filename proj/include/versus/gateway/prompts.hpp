#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "versus/gateway/stage.hpp"

namespace versus {

// Stage prompt templates. Templates are plain text assets with named
// {{PLACEHOLDER}} slots; the payload slot sits between the <<< / >>> fence
// lines so backends can find the structured block. Built-in templates ship
// with the binary (mirrored under data/prompts/); a directory of .txt files
// overrides them without a rebuild.
class PromptLibrary {
  public:
    static PromptLibrary embedded();
    // Loads <stage>.txt files (lowercase stage names) from dir; stages
    // without a file fall back to the embedded template.
    static PromptLibrary from_dir(const std::filesystem::path& dir);

    std::string render(StageTag tag, const std::map<std::string, std::string>& vars) const;
    const std::string& raw_template(StageTag tag) const;

  private:
    std::map<StageTag, std::string> templates_;
};

}  // namespace versus
