#pragma once

#include "listcomm/consensus.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace listcomm {

struct PipelineConfig {
    double rho = 6.0;
    std::uint32_t runs = 100;
    double tau = 0.2;
    double mu = 0.1;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    std::size_t top_k = 3;
    std::uint32_t draws = 1000;
    std::size_t min_size = 1;
    std::size_t min_core = 0;
    std::uint32_t fast_iterations = 5;
    std::uint32_t thorough_iterations = 50;
    double overlap_threshold = 0.3;
    bool iterate = false;
    bool unique_match = false;

    bool operator==(const PipelineConfig&) const = default;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

// Keys accepted by apply_setting, in documentation order.
const std::vector<std::string>& config_keys();

// Flat `key = value` lines; `#` starts a comment line. Throws ParseError.
Settings parse_config_text(std::string_view text);

// Throws ValidationError for an unknown key or an unparsable value.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);

// Range checks of every parameter. Throws ValidationError.
void validate(const PipelineConfig& config);

// defaults, then the config file, then command-line flags.
PipelineConfig resolve_config(const Settings& file_settings, const Settings& flag_settings);

EnsembleConfig ensemble_config(const PipelineConfig& config);
std::uint64_t stability_seed(std::uint64_t master_seed) noexcept;

} // namespace listcomm
