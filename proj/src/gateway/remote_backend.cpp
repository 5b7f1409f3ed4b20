#include "versus/gateway/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "versus/core/errors.hpp"

namespace versus {

namespace {

using Clock = std::chrono::steady_clock;

// Blocking token bucket; refills continuously at rate_per_sec up to burst.
class TokenBucket {
  public:
    TokenBucket(double rate_per_sec, int burst)
        : rate_(rate_per_sec), capacity_(burst > 0 ? burst : 1),
          tokens_(static_cast<double>(capacity_)), last_(Clock::now()) {}

    void acquire() {
        if (rate_ <= 0.0) return;
        while (true) {
            {
                std::lock_guard<std::mutex> lock(mutex_);
                refill();
                if (tokens_ >= 1.0) {
                    tokens_ -= 1.0;
                    return;
                }
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }

  private:
    void refill() {
        auto now = Clock::now();
        double elapsed = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ = std::min(static_cast<double>(capacity_), tokens_ + elapsed * rate_);
    }

    double rate_;
    int capacity_;
    double tokens_;
    Clock::time_point last_;
    std::mutex mutex_;
};

std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("remote backend: unsupported endpoint url: " + url);
    auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

class RemoteBackend final : public CompletionBackend {
  public:
    explicit RemoteBackend(RemoteConfig config)
        : config_(std::move(config)), bucket_(config_.rate_per_sec, config_.burst),
          rng_(std::random_device{}()) {
        if (config_.endpoint_url.empty())
            throw ConfigError("remote backend: endpoint_url not configured");
    }

    CompletionResult complete(const CompletionRequest& request) override {
        auto [base, path] = split_url(config_.endpoint_url);
        httplib::Client client(base);
        client.set_connection_timeout(0, config_.timeout_ms * 1000);
        client.set_read_timeout(0, config_.timeout_ms * 1000);

        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
            headers.emplace("Authorization", std::string("Bearer ") + key);

        nlohmann::json body = {{"prompt", request.prompt},
                               {"temperature", request.temperature},
                               {"max_output_tokens", request.max_output_tokens}};
        const std::string payload = body.dump();

        auto start = Clock::now();
        std::string last_error;
        GatewayError::Kind last_kind = GatewayError::Kind::Connection;
        for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
            if (attempt > 1) backoff_sleep(attempt - 1);
            bucket_.acquire();

            auto res = client.Post(path, headers, payload, "application/json");
            if (!res) {
                last_error = "connection error (" + httplib::to_string(res.error()) + ")";
                last_kind = res.error() == httplib::Error::ConnectionTimeout ||
                                    res.error() == httplib::Error::Read
                                ? GatewayError::Kind::Timeout
                                : GatewayError::Kind::Connection;
                continue;
            }
            if (res->status >= 200 && res->status < 300) {
                return parse_envelope(res->body, start);
            }
            last_error = "http status " + std::to_string(res->status);
            last_kind = GatewayError::Kind::HttpStatus;
            bool transient = res->status >= 500 || res->status == 429;
            if (!transient) break;
        }
        throw GatewayError(last_kind, "remote backend: " + config_.endpoint_url + ": " +
                                          last_error + " after retries");
    }

    std::string id() const override { return "remote:" + config_.endpoint_url; }

  private:
    CompletionResult parse_envelope(const std::string& body, Clock::time_point start) {
        nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("text") || !parsed["text"].is_string())
            throw GatewayError(GatewayError::Kind::Envelope,
                               "remote backend: malformed response envelope");
        CompletionResult result;
        result.text = parsed["text"].get<std::string>();
        result.backend_id = id();
        result.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                Clock::now() - start)
                                .count();
        return result;
    }

    void backoff_sleep(int retry_index) {
        double delay = config_.base_delay_ms;
        for (int i = 1; i < retry_index; ++i) delay *= config_.backoff_factor;
        double factor;
        {
            std::lock_guard<std::mutex> lock(rng_mutex_);
            std::uniform_real_distribution<double> dist(1.0 - config_.jitter,
                                                        1.0 + config_.jitter);
            factor = dist(rng_);
        }
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<int>(delay * factor)));
    }

    RemoteConfig config_;
    TokenBucket bucket_;
    std::mt19937_64 rng_;
    std::mutex rng_mutex_;
};

}  // namespace

std::unique_ptr<CompletionBackend> make_remote_backend(RemoteConfig config) {
    return std::make_unique<RemoteBackend>(std::move(config));
}

}  // namespace versus
