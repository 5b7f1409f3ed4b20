#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "versus/core/types.hpp"

namespace versus {

class Fetcher;

// A loaded per-entity document set plus load-time warnings (for example a
// document count outside the expected 5-20 per entity).
struct Corpus {
    std::vector<Entity> entities;
    std::vector<SourceDocument> documents;
    std::vector<std::string> warnings;

    const Entity* find_entity(const std::string& id_or_name) const;
    // Documents of one entity ordered by search_rank ascending.
    std::vector<const SourceDocument*> docs_for(const std::string& entity_id) const;
    const SourceDocument* find_document(const std::string& url) const;
    std::string digest() const;
};

// Loads a corpus manifest: JSON with an "entities" array where each entity
// has "id", "display_name" and "documents" [{url, search_rank?, text |
// text_file}]. text_file paths resolve relative to the manifest. Entries with
// neither text nor text_file require a fetcher to materialize the url.
Corpus load_corpus(const std::filesystem::path& manifest_path, Fetcher* fetcher = nullptr);

}  // namespace versus
