#include "versus/ingest/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "versus/core/digest.hpp"
#include "versus/core/errors.hpp"
#include "versus/core/normalize.hpp"
#include "versus/ingest/fetcher.hpp"

namespace versus {

const Entity* Corpus::find_entity(const std::string& id_or_name) const {
    for (const auto& e : entities) {
        if (e.id == id_or_name || norm_key(e.display_name) == norm_key(id_or_name)) return &e;
    }
    return nullptr;
}

std::vector<const SourceDocument*> Corpus::docs_for(const std::string& entity_id) const {
    std::vector<const SourceDocument*> out;
    for (const auto& d : documents) {
        if (d.entity_id == entity_id) out.push_back(&d);
    }
    std::stable_sort(out.begin(), out.end(), [](const SourceDocument* a, const SourceDocument* b) {
        return a->search_rank < b->search_rank;
    });
    return out;
}

const SourceDocument* Corpus::find_document(const std::string& url) const {
    for (const auto& d : documents) {
        if (d.url == url) return &d;
    }
    return nullptr;
}

std::string Corpus::digest() const {
    std::uint64_t h = fnv1a64("corpus");
    for (const auto& e : entities) {
        h = fnv1a64(e.id, h);
        h = fnv1a64(e.display_name, h);
    }
    for (const auto& d : documents) {
        h = fnv1a64(d.url, h);
        h = fnv1a64(std::to_string(d.search_rank), h);
        h = fnv1a64(d.raw_text, h);
    }
    return to_hex(h);
}

Corpus load_corpus(const std::filesystem::path& manifest_path, Fetcher* fetcher) {
    std::ifstream in(manifest_path);
    if (!in) throw CorpusError("corpus manifest not found: " + manifest_path.string());

    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw CorpusError("malformed corpus manifest " + manifest_path.string() + ": " + e.what());
    }

    Corpus corpus;
    if (!manifest.contains("entities") || !manifest["entities"].is_array() ||
        manifest["entities"].empty())
        throw CorpusError("corpus manifest has no documents: " + manifest_path.string());

    const auto base_dir = manifest_path.parent_path();
    for (const auto& ej : manifest["entities"]) {
        Entity entity;
        try {
            entity.id = ej.at("id").get<std::string>();
            entity.display_name = ej.at("display_name").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw CorpusError(std::string("malformed entity entry: ") + e.what());
        }
        if (trim(entity.display_name).empty())
            throw CorpusError("entity " + entity.id + ": display_name empty");
        if (corpus.find_entity(entity.id))
            throw CorpusError("duplicate entity id: " + entity.id);
        corpus.entities.push_back(entity);

        if (!ej.contains("documents") || !ej["documents"].is_array() || ej["documents"].empty())
            throw CorpusError("entity " + entity.id + " has no documents");

        std::set<std::string> urls_seen;
        int position = 0;
        for (const auto& dj : ej["documents"]) {
            ++position;
            SourceDocument doc;
            doc.entity_id = entity.id;
            try {
                doc.url = dj.at("url").get<std::string>();
                doc.search_rank = dj.value("search_rank", position);
            } catch (const nlohmann::json::exception& e) {
                throw CorpusError("entity " + entity.id + ": malformed document entry: " +
                                  e.what());
            }
            if (doc.url.empty())
                throw CorpusError("entity " + entity.id + ": document with empty url");
            if (doc.search_rank < 1)
                throw CorpusError("entity " + entity.id + ": search_rank must be >= 1 for " +
                                  doc.url);
            if (!urls_seen.insert(doc.url).second)
                throw CorpusError("entity " + entity.id + ": duplicate url " + doc.url);

            if (dj.contains("text")) {
                doc.raw_text = dj["text"].get<std::string>();
            } else if (dj.contains("text_file")) {
                auto path = base_dir / dj["text_file"].get<std::string>();
                std::ifstream tf(path);
                if (!tf)
                    throw CorpusError("entity " + entity.id + ": text_file not readable: " +
                                      path.string());
                std::ostringstream buf;
                buf << tf.rdbuf();
                doc.raw_text = buf.str();
            } else if (fetcher != nullptr) {
                doc.raw_text = fetcher->fetch(doc.url);
            } else {
                throw CorpusError("entity " + entity.id + ": document " + doc.url +
                                  " has neither text nor text_file and no fetcher is configured");
            }
            corpus.documents.push_back(std::move(doc));
        }

        auto count = static_cast<int>(urls_seen.size());
        if (count < 5 || count > 20) {
            std::ostringstream warn;
            warn << "entity " << entity.id << " has " << count
                 << " documents, outside the expected 5-20 range";
            corpus.warnings.push_back(warn.str());
        }
    }
    return corpus;
}

}  // namespace versus
