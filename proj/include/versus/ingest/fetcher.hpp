#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace versus {

struct FetcherConfig {
    int timeout_ms = 10000;
    int max_retries = 2;  // attempts = 1 + max_retries
    std::filesystem::path cache_dir;
};

// HTTP GET client that materializes document text for corpus manifest
// entries. Responses are cached on disk keyed by URL hash, so repeat runs
// never refetch.
class Fetcher {
  public:
    explicit Fetcher(FetcherConfig config);

    // Returns body text; throws CorpusError on failure after retries.
    std::string fetch(const std::string& url);

    std::filesystem::path cache_path(const std::string& url) const;

  private:
    std::optional<std::string> read_cache(const std::string& url) const;
    void write_cache(const std::string& url, const std::string& body) const;

    FetcherConfig config_;
};

}  // namespace versus
