#include "versus/ingest/fetcher.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>

#include "versus/core/digest.hpp"
#include "versus/core/errors.hpp"

namespace versus {

namespace {

// Splits "http://host:port/path" into (scheme://host:port, /path).
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw CorpusError("fetcher: unsupported url: " + url);
    auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

}  // namespace

Fetcher::Fetcher(FetcherConfig config) : config_(std::move(config)) {
    if (!config_.cache_dir.empty()) std::filesystem::create_directories(config_.cache_dir);
}

std::filesystem::path Fetcher::cache_path(const std::string& url) const {
    return config_.cache_dir / (digest_hex(url) + ".txt");
}

std::optional<std::string> Fetcher::read_cache(const std::string& url) const {
    if (config_.cache_dir.empty()) return std::nullopt;
    std::ifstream in(cache_path(url));
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void Fetcher::write_cache(const std::string& url, const std::string& body) const {
    if (config_.cache_dir.empty()) return;
    std::ofstream out(cache_path(url));
    out << body;
}

std::string Fetcher::fetch(const std::string& url) {
    if (auto cached = read_cache(url)) return *cached;

    auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(0, config_.timeout_ms * 1000);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        auto res = client.Get(path);
        if (res && res->status >= 200 && res->status < 300) {
            write_cache(url, res->body);
            return res->body;
        }
        last_error = res ? "http status " + std::to_string(res->status)
                         : "connection error (" + httplib::to_string(res.error()) + ")";
    }
    throw CorpusError("fetcher: " + url + " failed after " +
                      std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace versus
