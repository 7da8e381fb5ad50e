#pragma once

#include "listcomm/config.hpp"
#include "listcomm/corpus.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace listcomm {

// Fixed file names of the output bundle.
namespace artifact {
inline constexpr const char* graph = "graph.tsv";
inline constexpr const char* graph_nodes = "graph_nodes.txt";
inline constexpr const char* consensus = "consensus.tsv";
inline constexpr const char* communities = "communities.json";
inline constexpr const char* stability = "stability.tsv";
inline constexpr const char* labels = "labels.json";
inline constexpr const char* users = "users.json";
inline constexpr const char* eval = "eval.tsv";
} // namespace artifact

struct InputPaths {
    std::filesystem::path memberships;
    std::filesystem::path lists;
    std::optional<std::filesystem::path> truth;
    std::optional<std::filesystem::path> core;      // one user id per line
    std::optional<std::filesystem::path> stopwords; // replaces the built-in list
};

enum class ExitCode : int { ok = 0, validation = 2, parse = 3, internal = 4 };

ExitCode exit_code_for(const std::exception& e) noexcept;

// A stage failure: names the stage, keeps the cause's exit code.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, ExitCode code, const std::string& cause)
        : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)), code_(code) {}

    const std::string& stage() const noexcept { return stage_; }
    ExitCode code() const noexcept { return code_; }

private:
    std::string stage_;
    ExitCode code_;
};

// Corpus after the min_size / min_core filter. min_core > 0 requires a core file.
MembershipCorpus load_pipeline_corpus(const PipelineConfig& config, const InputPaths& inputs);

// Each stage reads what earlier stages left in `out` and writes its own
// artifact there, so a run can resume from any stage.
void stage_build_graph(const PipelineConfig& config, const InputPaths& inputs, const std::filesystem::path& out);
void stage_ensemble(const PipelineConfig& config, const std::filesystem::path& out);
void stage_consensus(const PipelineConfig& config, const std::filesystem::path& out);
void stage_stability(const PipelineConfig& config, const std::filesystem::path& out);
void stage_label(const PipelineConfig& config, const InputPaths& inputs, const std::filesystem::path& out);
void stage_members(const PipelineConfig& config, const InputPaths& inputs, const std::filesystem::path& out);
void stage_evaluate(const PipelineConfig& config, const InputPaths& inputs, const std::filesystem::path& out);

// All stages in order; evaluate only when inputs.truth is set. Failures are
// rethrown as StageError; artifacts of completed stages stay on disk.
void run_pipeline(const PipelineConfig& config, const InputPaths& inputs, const std::filesystem::path& out);

} // namespace listcomm
