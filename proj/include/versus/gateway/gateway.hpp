#pragma once

#include <memory>
#include <string>

#include "versus/gateway/backend.hpp"
#include "versus/gateway/grammar.hpp"
#include "versus/gateway/stage.hpp"

namespace versus {

struct GatewayConfig {
    int context_window = 8192;
    int max_parallel = 8;  // concurrent in-flight requests
};

// Front door for every LM call. Enforces request invariants (size limit,
// AUTORATE at temperature 0), bounds in-flight parallelism, and recovers from
// one malformed response by re-prompting with a format reminder.
class Gateway {
  public:
    Gateway(std::shared_ptr<CompletionBackend> backend, GatewayConfig config = {});
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    CompletionResult complete(const CompletionRequest& request);

    // complete() + parse, retrying once with a terse format reminder appended
    // to the prompt. A second malformed response surfaces as ParseError.
    StageOutput complete_parsed(const CompletionRequest& request);

    std::string backend_id() const;
    int context_window() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace versus
