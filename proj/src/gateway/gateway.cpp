#include "versus/gateway/gateway.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stdexcept>

#include "versus/core/errors.hpp"
#include "versus/ingest/tokenizer.hpp"

namespace versus {

namespace {

constexpr const char* kFormatReminder =
    "\n\nFormat reminder: respond only with the documented record lines, nothing else.";

// Counting gate for in-flight requests; RAII slot.
class Semaphore {
  public:
    explicit Semaphore(int slots) : slots_(slots > 0 ? slots : 1) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return slots_ > 0; });
        --slots_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++slots_;
        }
        cv_.notify_one();
    }

  private:
    int slots_;
    std::mutex mutex_;
    std::condition_variable cv_;
};

struct SlotGuard {
    explicit SlotGuard(Semaphore& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
    Semaphore& sem;
};

}  // namespace

struct Gateway::Impl {
    std::shared_ptr<CompletionBackend> backend;
    GatewayConfig config;
    Semaphore semaphore;

    Impl(std::shared_ptr<CompletionBackend> b, GatewayConfig c)
        : backend(std::move(b)), config(c), semaphore(c.max_parallel) {}
};

Gateway::Gateway(std::shared_ptr<CompletionBackend> backend, GatewayConfig config)
    : impl_(std::make_unique<Impl>(std::move(backend), config)) {
    if (!impl_->backend) throw ConfigError("gateway: backend is null");
}

Gateway::~Gateway() = default;

CompletionResult Gateway::complete(const CompletionRequest& request) {
    if (request.stage_tag == StageTag::AUTORATE && request.temperature != 0.0)
        throw std::invalid_argument("gateway: AUTORATE requests must carry temperature 0");
    if (request.temperature < 0.0 || request.temperature > 2.0)
        throw std::invalid_argument("gateway: temperature out of [0,2]");
    if (request.max_output_tokens <= 0)
        throw std::invalid_argument("gateway: max_output_tokens must be positive");

    int prompt_tokens = default_tokenizer().count_tokens(request.prompt);
    if (prompt_tokens + request.max_output_tokens > impl_->config.context_window)
        throw GatewayError(GatewayError::Kind::TooLarge,
                           "request too large: " + std::to_string(prompt_tokens) +
                               " prompt tokens + " + std::to_string(request.max_output_tokens) +
                               " output tokens exceed window of " +
                               std::to_string(impl_->config.context_window));

    SlotGuard guard(impl_->semaphore);
    auto start = std::chrono::steady_clock::now();
    CompletionResult result = impl_->backend->complete(request);
    if (result.latency_ms == 0)
        result.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    return result;
}

StageOutput Gateway::complete_parsed(const CompletionRequest& request) {
    CompletionResult first = complete(request);
    try {
        return parse_stage_output(request.stage_tag, first.text);
    } catch (const ParseError&) {
        CompletionRequest retry = request;
        retry.prompt += kFormatReminder;
        CompletionResult second = complete(retry);
        return parse_stage_output(request.stage_tag, second.text);
    }
}

std::string Gateway::backend_id() const { return impl_->backend->id(); }

int Gateway::context_window() const { return impl_->config.context_window; }

}  // namespace versus
