#pragma once

#include <memory>
#include <string>

#include "versus/gateway/backend.hpp"

namespace versus {

// Generic JSON-over-HTTP completion protocol: POST {prompt, temperature,
// max_output_tokens} to endpoint_url, response {"text": ...}. Any vendor API
// adapts through a thin shim server speaking this shape.
struct RemoteConfig {
    std::string endpoint_url;  // e.g. http://host:port/v1/complete
    int timeout_ms = 30000;
    int max_attempts = 3;      // transient failures retried with backoff
    int base_delay_ms = 500;
    double backoff_factor = 2.0;
    double jitter = 0.2;       // +-20% on each delay
    double rate_per_sec = 0.0; // token bucket; 0 disables rate limiting
    int burst = 4;
    std::string api_key_env = "VERSUS_API_KEY";
};

std::unique_ptr<CompletionBackend> make_remote_backend(RemoteConfig config);

}  // namespace versus
