#include "listcomm/pipeline.hpp"

#include "listcomm/basedetect.hpp"
#include "listcomm/consensus.hpp"
#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/labeling.hpp"
#include "listcomm/listgraph.hpp"
#include "listcomm/membership.hpp"
#include "listcomm/stability.hpp"

#include <json.hpp>

#include <functional>
#include <iostream>
#include <map>

namespace listcomm {

namespace fs = std::filesystem;

namespace {

ListGraph read_graph(const fs::path& out) {
    return read_list_graph(out / artifact::graph, out / artifact::graph_nodes);
}

std::vector<std::string> read_nodes(const fs::path& out) {
    return parse_list_graph("", io::read_file(out / artifact::graph_nodes)).nodes;
}

ConsensusMatrix read_matrix(const fs::path& out, std::vector<std::string> nodes) {
    return parse_consensus(io::read_file(out / artifact::consensus), std::move(nodes));
}

CommunitySet read_communities(const fs::path& out, const std::vector<std::string>& nodes) {
    return parse_communities(io::read_file(out / artifact::communities), nodes);
}

std::vector<std::string> member_names(const std::vector<NodeId>& members, const std::vector<std::string>& nodes) {
    std::vector<std::string> names;
    names.reserve(members.size());
    for (NodeId v : members) names.push_back(nodes.at(v));
    return names;
}

std::map<std::uint32_t, std::vector<std::string>> parse_labels(std::string_view text) {
    std::map<std::uint32_t, std::vector<std::string>> out;
    try {
        for (const auto& obj : nlohmann::json::parse(text)) {
            out[obj.at("community_id").get<std::uint32_t>()] = obj.at("labels").get<std::vector<std::string>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("labels: ") + e.what());
    }
    return out;
}

UserSet evaluation_core(const InputPaths& inputs, const MembershipCorpus& corpus) {
    if (inputs.core) return load_user_set(*inputs.core);
    UserSet all;
    for (const auto& [user, lists] : corpus.user_index()) all.insert(user);
    return all;
}

void run_stage(const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, exit_code_for(e), e.what());
    }
}

} // namespace

ExitCode exit_code_for(const std::exception& e) noexcept {
    if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->code();
    if (dynamic_cast<const ParseError*>(&e)) return ExitCode::parse;
    if (dynamic_cast<const ValidationError*>(&e)) return ExitCode::validation;
    if (dynamic_cast<const DomainError*>(&e)) return ExitCode::validation;
    return ExitCode::internal;
}

MembershipCorpus load_pipeline_corpus(const PipelineConfig& config, const InputPaths& inputs) {
    MembershipCorpus corpus = load_corpus(inputs.memberships, inputs.lists);
    if (config.min_size <= 1 && config.min_core == 0) return corpus;
    UserSet core;
    if (inputs.core) {
        core = load_user_set(*inputs.core);
    } else if (config.min_core > 0) {
        throw ValidationError("min_core > 0 needs a core user file");
    }
    return filter_lists(corpus, config.min_size, config.min_core, core);
}

void stage_build_graph(const PipelineConfig& config, const InputPaths& inputs, const fs::path& out) {
    validate(config);
    const auto corpus = load_pipeline_corpus(config, inputs);
    if (corpus.list_count() == 0) throw ValidationError("corpus has no lists");
    const auto graph = build_list_graph(corpus, GraphBuildConfig{config.rho}, config.workers);
    write_list_graph(graph, out / artifact::graph, out / artifact::graph_nodes);
}

void stage_ensemble(const PipelineConfig& config, const fs::path& out) {
    validate(config);
    const auto graph = read_graph(out);
    const auto ens = ensemble_config(config);
    const auto matrix = config.iterate ? iterate_ensemble(graph, ens, config.workers)
                                       : run_ensemble(graph, ens, config.workers);
    io::write_file(out / artifact::consensus, format_consensus(matrix));
}

void stage_consensus(const PipelineConfig& config, const fs::path& out) {
    validate(config);
    const auto nodes = read_nodes(out);
    const auto matrix = read_matrix(out, nodes);
    const auto communities = consensus_communities(matrix, ensemble_config(config));
    io::write_file(out / artifact::communities, format_communities(communities, nodes));
}

void stage_stability(const PipelineConfig& config, const fs::path& out) {
    validate(config);
    const auto nodes = read_nodes(out);
    const auto matrix = read_matrix(out, nodes);
    const auto communities = read_communities(out, nodes);
    const auto ranking = rank_communities(communities, matrix, config.draws, stability_seed(config.master_seed));
    io::write_file(out / artifact::stability, format_ranking(ranking));
}

void stage_label(const PipelineConfig& config, const InputPaths& inputs, const fs::path& out) {
    validate(config);
    const auto corpus = load_pipeline_corpus(config, inputs);
    const auto nodes = read_nodes(out);
    const auto communities = read_communities(out, nodes);
    LabelingConfig lc;
    lc.top_k = config.top_k;
    lc.stopwords = inputs.stopwords ? load_stopwords(*inputs.stopwords) : default_stopwords();
    const CommunityLabeler labeler(build_vectors(corpus, lc));

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::uint32_t id = 0; id < communities.size(); ++id) {
        const auto terms = labeler.label(member_names(communities.communities[id], nodes), lc.top_k);
        nlohmann::ordered_json obj;
        obj["community_id"] = id;
        obj["labels"] = nlohmann::ordered_json::array();
        obj["scores"] = nlohmann::ordered_json::array();
        for (const auto& t : terms) {
            obj["labels"].push_back(t.term);
            obj["scores"].push_back(io::quantize6(t.score));
        }
        arr.push_back(std::move(obj));
    }
    io::write_file(out / artifact::labels, arr.dump(1) + "\n");
}

void stage_members(const PipelineConfig& config, const InputPaths& inputs, const fs::path& out) {
    validate(config);
    const auto corpus = load_pipeline_corpus(config, inputs);
    const auto nodes = read_nodes(out);
    const auto communities = read_communities(out, nodes);
    const auto ranking = parse_ranking(io::read_file(out / artifact::stability));
    const auto labels = parse_labels(io::read_file(out / artifact::labels));

    std::vector<UserCommunityReport> reports;
    for (const auto& row : ranking) {
        if (row.community_id >= communities.size())
            throw ValidationError("stability row names unknown community " + std::to_string(row.community_id));
        UserCommunityReport r;
        r.community = derive_members(row.community_id,
                                     member_names(communities.communities[row.community_id], nodes), corpus, config.mu);
        r.stability = row.corrected;
        if (auto it = labels.find(row.community_id); it != labels.end()) r.labels = it->second;
        reports.push_back(std::move(r));
    }
    io::write_file(out / artifact::users, format_user_reports(reports));
}

void stage_evaluate(const PipelineConfig& config, const InputPaths& inputs, const fs::path& out) {
    validate(config);
    if (!inputs.truth) throw ValidationError("evaluate needs a ground-truth file");
    const auto truth = load_ground_truth(*inputs.truth);
    const auto corpus = load_pipeline_corpus(config, inputs);
    const auto core = evaluation_core(inputs, corpus);
    std::vector<UserCommunity> communities;
    for (auto& r : parse_user_reports(io::read_file(out / artifact::users))) communities.push_back(std::move(r.community));
    std::vector<std::string> skipped;
    const auto rows = evaluate(communities, truth, core, EvalOptions{config.unique_match}, &skipped);
    for (const auto& category : skipped) std::cerr << "warning: empty category skipped: " << category << '\n';
    io::write_file(out / artifact::eval, format_eval(rows));
}

void run_pipeline(const PipelineConfig& config, const InputPaths& inputs, const fs::path& out) {
    run_stage("config", [&] { validate(config); });
    run_stage("build-graph", [&] { stage_build_graph(config, inputs, out); });
    run_stage("ensemble", [&] { stage_ensemble(config, out); });
    run_stage("consensus", [&] { stage_consensus(config, out); });
    run_stage("stability", [&] { stage_stability(config, out); });
    run_stage("label", [&] { stage_label(config, inputs, out); });
    run_stage("members", [&] { stage_members(config, inputs, out); });
    if (inputs.truth) run_stage("evaluate", [&] { stage_evaluate(config, inputs, out); });
}

} // namespace listcomm
