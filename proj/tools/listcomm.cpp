// listcomm: ensemble overlapping community detection over curated lists.

#include "listcomm/config.hpp"
#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/pipeline.hpp"
#include "listcomm/synth.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using listcomm::ExitCode;
namespace fs = std::filesystem;

struct ParamFlags {
    std::map<std::string, std::optional<std::string>> values;
    bool iterate = false;
    bool unique_match = false;
    std::optional<std::string> config_file;
};

struct Inputs {
    std::string memberships;
    std::string lists;
    std::optional<std::string> truth;
    std::optional<std::string> core;
    std::optional<std::string> stopwords;
};

void add_params(CLI::App* cmd, ParamFlags& p) {
    static const std::vector<std::pair<std::string, std::string>> flags = {
        {"rho", "minimum edge LPV (-log10 p), default 6"},
        {"runs", "base detections in the ensemble, default 100"},
        {"tau", "consensus graph threshold, default 0.2"},
        {"mu", "user membership threshold, default 0.1"},
        {"seed", "master seed, default 0"},
        {"workers", "threads for graph building and the ensemble, default 1"},
        {"top_k", "labels per community, default 3"},
        {"draws", "random draws per size for expected stability, default 1000"},
        {"min_size", "drop lists with fewer members, default 1"},
        {"min_core", "drop lists with fewer core members, default 0"},
        {"fast_iterations", "iterations of each base detection, default 5"},
        {"thorough_iterations", "iterations of the consensus detection, default 50"},
        {"overlap_threshold", "label frequency kept by the detector, default 0.3"},
    };
    for (const auto& [key, help] : flags) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        cmd->add_option(flag, p.values[key], help);
    }
    cmd->add_flag("--iterate", p.iterate, "repeat the ensemble on the consensus graph until stable");
    cmd->add_flag("--unique-match", p.unique_match, "one-to-one category/community matching");
    cmd->add_option("--config", p.config_file, "key = value configuration file");
}

void add_inputs(CLI::App* cmd, Inputs& in, bool corpus_required) {
    auto* m = cmd->add_option("--memberships", in.memberships, "list_id<TAB>user_id file");
    auto* l = cmd->add_option("--lists", in.lists, "JSON-lines list metadata");
    if (corpus_required) {
        m->required();
        l->required();
    }
    cmd->add_option("--truth", in.truth, "category<TAB>user_id ground truth");
    cmd->add_option("--core", in.core, "core user ids, one per line");
    cmd->add_option("--stopwords", in.stopwords, "stopword file, one term per line");
}

listcomm::PipelineConfig resolve(const ParamFlags& p) {
    listcomm::Settings file;
    if (p.config_file) file = listcomm::parse_config_text(listcomm::io::read_file(*p.config_file));
    listcomm::Settings flags;
    for (const auto& key : listcomm::config_keys()) {
        if (auto it = p.values.find(key); it != p.values.end() && it->second) flags.emplace_back(key, *it->second);
    }
    if (p.iterate) flags.emplace_back("iterate", "true");
    if (p.unique_match) flags.emplace_back("unique_match", "true");
    return listcomm::resolve_config(file, flags);
}

listcomm::InputPaths to_paths(const Inputs& in) {
    listcomm::InputPaths paths;
    paths.memberships = in.memberships;
    paths.lists = in.lists;
    if (in.truth) paths.truth = *in.truth;
    if (in.core) paths.core = *in.core;
    if (in.stopwords) paths.stopwords = *in.stopwords;
    return paths;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ensemble overlapping community detection over curated user lists"};
    app.require_subcommand(1);

    std::string out;
    ParamFlags params;
    Inputs inputs;

    struct Stage {
        const char* name;
        const char* help;
        bool needs_corpus;
    };
    const Stage stages[] = {
        {"build-graph", "build the significance-weighted list graph", true},
        {"ensemble", "aggregate base detections into the consensus matrix", false},
        {"consensus", "detect consensus communities on the thresholded matrix", false},
        {"stability", "rank consensus communities by corrected stability", false},
        {"label", "label communities from list names and descriptions", true},
        {"members", "derive weighted user communities", true},
        {"evaluate", "score user communities against ground truth", true},
        {"pipeline", "run every stage", true},
    };
    std::map<std::string, CLI::App*> commands;
    for (const auto& s : stages) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        cmd->add_option("--out", out, "bundle directory")->required();
        add_params(cmd, params);
        add_inputs(cmd, inputs, s.needs_corpus);
        commands[s.name] = cmd;
    }

    listcomm::PlantedSpec spec;
    std::uint64_t synth_seed = 0;
    auto* synth_cmd = app.add_subcommand("synth", "generate a planted-community benchmark corpus");
    synth_cmd->add_option("--out", out, "output directory")->required();
    synth_cmd->add_option("--groups", spec.groups, "planted groups");
    synth_cmd->add_option("--users-per-group", spec.users_per_group, "users per group");
    synth_cmd->add_option("--lists-per-group", spec.lists_per_group, "lists per group");
    synth_cmd->add_option("--min-list-size", spec.min_list_size, "smallest list");
    synth_cmd->add_option("--max-list-size", spec.max_list_size, "largest list");
    synth_cmd->add_option("--noise", spec.noise, "chance a member comes from outside the group");
    synth_cmd->add_option("--overlap", spec.overlap, "fraction of users in two groups");
    synth_cmd->add_option("--popularity", spec.popularity, "Zipf exponent of in-group member picks");
    synth_cmd->add_option("--seed", synth_seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::validation);
    }

    try {
        if (synth_cmd->parsed()) {
            listcomm::write_synthetic(listcomm::synth(spec, synth_seed), out);
            return 0;
        }
        const auto config = resolve(params);
        const auto paths = to_paths(inputs);
        const fs::path dir = out;
        if (commands["pipeline"]->parsed()) {
            listcomm::run_pipeline(config, paths, dir);
        } else if (commands["build-graph"]->parsed()) {
            listcomm::stage_build_graph(config, paths, dir);
        } else if (commands["ensemble"]->parsed()) {
            listcomm::stage_ensemble(config, dir);
        } else if (commands["consensus"]->parsed()) {
            listcomm::stage_consensus(config, dir);
        } else if (commands["stability"]->parsed()) {
            listcomm::stage_stability(config, dir);
        } else if (commands["label"]->parsed()) {
            listcomm::stage_label(config, paths, dir);
        } else if (commands["members"]->parsed()) {
            listcomm::stage_members(config, paths, dir);
        } else if (commands["evaluate"]->parsed()) {
            listcomm::stage_evaluate(config, paths, dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(listcomm::exit_code_for(e));
    }
    return 0;
}
