#include "listcomm/config.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/random.hpp"

#include <algorithm>
#include <limits>

namespace listcomm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double as_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    if (!io::parse_double(value, v)) throw ValidationError("config " + key + ": not a number: " + value);
    return v;
}

unsigned long long as_uint(const std::string& key, const std::string& value, unsigned long long max) {
    unsigned long long v = 0;
    if (!io::parse_uint(value, v) || v > max)
        throw ValidationError("config " + key + ": not a non-negative integer in range: " + value);
    return v;
}

bool as_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ValidationError("config " + key + ": not a boolean: " + value);
}

constexpr auto kU32 = std::numeric_limits<std::uint32_t>::max();

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "rho",       "runs",     "tau",             "mu",
        "seed",      "workers",  "top_k",           "draws",
        "min_size",  "min_core", "fast_iterations", "thorough_iterations",
        "overlap_threshold",     "iterate",         "unique_match"};
    return keys;
}

Settings parse_config_text(std::string_view text) {
    Settings out;
    std::size_t line_no = 0;
    for (auto raw : io::split_lines(text)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("config", line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("config", line_no, "empty key");
        out.emplace_back(std::string(key), std::string(value));
    }
    return out;
}

void apply_setting(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "rho") c.rho = as_double(key, value);
    else if (key == "runs") c.runs = static_cast<std::uint32_t>(as_uint(key, value, kU32));
    else if (key == "tau") c.tau = as_double(key, value);
    else if (key == "mu") c.mu = as_double(key, value);
    else if (key == "seed") c.master_seed = as_uint(key, value, std::numeric_limits<std::uint64_t>::max());
    else if (key == "workers") c.workers = static_cast<unsigned>(as_uint(key, value, 4096));
    else if (key == "top_k") c.top_k = as_uint(key, value, kU32);
    else if (key == "draws") c.draws = static_cast<std::uint32_t>(as_uint(key, value, kU32));
    else if (key == "min_size") c.min_size = as_uint(key, value, kU32);
    else if (key == "min_core") c.min_core = as_uint(key, value, kU32);
    else if (key == "fast_iterations") c.fast_iterations = static_cast<std::uint32_t>(as_uint(key, value, kU32));
    else if (key == "thorough_iterations") c.thorough_iterations = static_cast<std::uint32_t>(as_uint(key, value, kU32));
    else if (key == "overlap_threshold") c.overlap_threshold = as_double(key, value);
    else if (key == "iterate") c.iterate = as_bool(key, value);
    else if (key == "unique_match") c.unique_match = as_bool(key, value);
    else throw ValidationError("unknown config key: " + key);
}

void validate(const PipelineConfig& c) {
    if (!(c.rho >= 0.0)) throw ValidationError("rho must be >= 0");
    if (c.runs < 1) throw ValidationError("runs must be >= 1");
    if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw ValidationError("tau must lie in [0, 1]");
    if (!(c.mu >= 0.0 && c.mu <= 1.0)) throw ValidationError("mu must lie in [0, 1]");
    if (c.workers < 1) throw ValidationError("workers must be >= 1");
    if (c.top_k < 1) throw ValidationError("top_k must be >= 1");
    if (c.draws < 1) throw ValidationError("draws must be >= 1");
    if (c.min_size < 1) throw ValidationError("min_size must be >= 1");
    if (c.fast_iterations < 1 || c.thorough_iterations < 1) throw ValidationError("iterations must be >= 1");
    if (!(c.overlap_threshold > 0.0 && c.overlap_threshold < 1.0))
        throw ValidationError("overlap_threshold must lie in (0, 1)");
}

PipelineConfig resolve_config(const Settings& file_settings, const Settings& flag_settings) {
    PipelineConfig c;
    for (const auto& [k, v] : file_settings) apply_setting(c, k, v);
    for (const auto& [k, v] : flag_settings) apply_setting(c, k, v);
    validate(c);
    return c;
}

EnsembleConfig ensemble_config(const PipelineConfig& c) {
    EnsembleConfig e;
    e.runs = c.runs;
    e.tau = c.tau;
    e.master_seed = c.master_seed;
    e.fast_config = {DetectorMode::fast, c.fast_iterations, c.overlap_threshold, 0};
    e.thorough_config = {DetectorMode::thorough, c.thorough_iterations, c.overlap_threshold, 0};
    return e;
}

std::uint64_t stability_seed(std::uint64_t master_seed) noexcept { return mix_seed(master_seed, 0x57ab1e5eedULL); }

} // namespace listcomm
