#include "versus/pipeline/config.hpp"

#include <cmath>

#include "versus/core/digest.hpp"
#include "versus/core/errors.hpp"

namespace versus {

void PipelineConfig::validate() const {
    if (budget.context_window <= 0) throw ConfigError("config: context_window must be positive");
    if (budget.prompt_reserve <= 0) throw ConfigError("config: prompt_reserve must be positive");
    if (budget.effective() <= 0)
        throw ConfigError("config: prompt_reserve leaves no room in the context window");
    if (webpages_per_entity < 5 || webpages_per_entity > 20)
        throw ConfigError("config: webpages_per_entity must be in [5,20]");
    if (cr_max_iterations < 1) throw ConfigError("config: cr_max_iterations must be >= 1");
    if (majority_threshold < 0.5 || majority_threshold > 1.0)
        throw ConfigError("config: majority_threshold must be in [0.5,1]");
    if (rank_weights.contrast < 0.0 || rank_weights.popularity < 0.0)
        throw ConfigError("config: rank weights must be non-negative");
    if (std::abs(rank_weights.contrast + rank_weights.popularity - 1.0) > 1e-9)
        throw ConfigError("config: rank weights must sum to 1");
    if (top_k_rows < 1) throw ConfigError("config: top_k_rows must be >= 1");
    if (max_parallel < 1) throw ConfigError("config: max_parallel must be >= 1");
}

nlohmann::json PipelineConfig::to_json() const {
    return nlohmann::json{
        {"context_window", budget.context_window},
        {"prompt_reserve", budget.prompt_reserve},
        {"webpages_per_entity", webpages_per_entity},
        {"cr_enabled", cr_enabled},
        {"cr_max_iterations", cr_max_iterations},
        {"majority_threshold", majority_threshold},
        {"rank_weight_contrast", rank_weights.contrast},
        {"rank_weight_popularity", rank_weights.popularity},
        {"top_k_rows", top_k_rows},
        {"parallel", parallel},
        {"max_parallel", max_parallel},
        {"seed", seed},
        {"prompts_dir", prompts_dir},
    };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    PipelineConfig c;
    c.budget.context_window = j.value("context_window", c.budget.context_window);
    c.budget.prompt_reserve = j.value("prompt_reserve", c.budget.prompt_reserve);
    c.webpages_per_entity = j.value("webpages_per_entity", c.webpages_per_entity);
    c.cr_enabled = j.value("cr_enabled", c.cr_enabled);
    c.cr_max_iterations = j.value("cr_max_iterations", c.cr_max_iterations);
    c.majority_threshold = j.value("majority_threshold", c.majority_threshold);
    c.rank_weights.contrast = j.value("rank_weight_contrast", c.rank_weights.contrast);
    c.rank_weights.popularity = j.value("rank_weight_popularity", c.rank_weights.popularity);
    c.top_k_rows = j.value("top_k_rows", c.top_k_rows);
    c.parallel = j.value("parallel", c.parallel);
    c.max_parallel = j.value("max_parallel", c.max_parallel);
    c.seed = j.value("seed", c.seed);
    c.prompts_dir = j.value("prompts_dir", c.prompts_dir);
    return c;
}

std::string PipelineConfig::hash() const { return digest_hex(to_json().dump()); }

}  // namespace versus
