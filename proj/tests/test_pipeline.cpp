#include "listcomm/basedetect.hpp"
#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/membership.hpp"
#include "listcomm/pipeline.hpp"
#include "listcomm/synth.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <functional>
#include <map>

using namespace listcomm;
namespace fs = std::filesystem;

namespace {

using Bundle = std::map<std::string, std::string>;

Bundle read_bundle(const fs::path& dir) {
    Bundle b;
    for (const auto& entry : fs::directory_iterator(dir)) b[entry.path().filename().string()] = io::read_file(entry.path());
    return b;
}

InputPaths inputs_in(const fs::path& dir) {
    return {dir / "memberships.tsv", dir / "lists.jsonl", dir / "groundtruth.tsv", dir / "core.txt", std::nullopt};
}

PipelineConfig small_config() {
    PipelineConfig c;
    c.runs = 6;
    c.draws = 200;
    c.master_seed = 5;
    return c;
}

// Four planted groups, written once per test.
void write_small_benchmark(const fs::path& dir) {
    PlantedSpec spec;
    spec.groups = 4;
    spec.lists_per_group = 20;
    spec.overlap = 0.1;
    write_synthetic(synth(spec, 8), dir);
}

const std::vector<std::string> kStageArtifacts = {artifact::graph,     artifact::consensus, artifact::communities,
                                                  artifact::stability, artifact::labels,    artifact::users,
                                                  artifact::eval};

} // namespace

TEST_CASE("pipeline writes every artifact and is repeatable") {
    testutil::TempDir dir("pipe");
    write_small_benchmark(dir.path());
    const auto in = inputs_in(dir.path());
    run_pipeline(small_config(), in, dir / "a");
    run_pipeline(small_config(), in, dir / "b");
    const auto a = read_bundle(dir / "a");
    for (const auto& name : kStageArtifacts) CHECK(a.contains(name));
    CHECK(a.contains(artifact::graph_nodes));
    CHECK(a == read_bundle(dir / "b"));

    auto other = small_config();
    other.master_seed = 6;
    run_pipeline(other, in, dir / "c");
    CHECK(read_bundle(dir / "c").at(artifact::consensus) != a.at(artifact::consensus));
}

TEST_CASE("worker count leaves the bundle unchanged") {
    testutil::TempDir dir("pipe-workers");
    write_small_benchmark(dir.path());
    auto one = small_config();
    auto eight = small_config();
    eight.workers = 8;
    run_pipeline(one, inputs_in(dir.path()), dir / "w1");
    run_pipeline(eight, inputs_in(dir.path()), dir / "w8");
    CHECK(read_bundle(dir / "w1") == read_bundle(dir / "w8"));
}

TEST_CASE("resuming from any stage reproduces the bundle") {
    testutil::TempDir dir("pipe-resume");
    write_small_benchmark(dir.path());
    const auto in = inputs_in(dir.path());
    const auto cfg = small_config();
    run_pipeline(cfg, in, dir / "full");
    const auto full = read_bundle(dir / "full");

    const std::vector<std::function<void(const fs::path&)>> stages = {
        [&](const fs::path& out) { stage_build_graph(cfg, in, out); },
        [&](const fs::path& out) { stage_ensemble(cfg, out); },
        [&](const fs::path& out) { stage_consensus(cfg, out); },
        [&](const fs::path& out) { stage_stability(cfg, out); },
        [&](const fs::path& out) { stage_label(cfg, in, out); },
        [&](const fs::path& out) { stage_members(cfg, in, out); },
        [&](const fs::path& out) { stage_evaluate(cfg, in, out); },
    };
    for (std::size_t from = 1; from < stages.size(); ++from) {
        INFO("resume from stage " << from);
        const auto out = dir / ("resume" + std::to_string(from));
        fs::create_directories(out);
        // Keep only what the earlier stages produced.
        for (const auto& [name, content] : full) {
            const auto pos = std::find(kStageArtifacts.begin(), kStageArtifacts.end(), name);
            const auto stage = pos == kStageArtifacts.end() ? 0 : static_cast<std::size_t>(pos - kStageArtifacts.begin());
            if (stage < from) io::write_file(out / name, content);
        }
        for (std::size_t s = from; s < stages.size(); ++s) stages[s](out);
        CHECK(read_bundle(out) == full);
    }
}

TEST_CASE("stage failures name the stage and keep earlier artifacts") {
    testutil::TempDir dir("pipe-fail");
    write_small_benchmark(dir.path());

    auto in = inputs_in(dir.path());
    in.stopwords = dir / "missing-stopwords.txt";
    try {
        run_pipeline(small_config(), in, dir / "out");
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "label");
        CHECK(std::string(e.what()).starts_with("label: "));
    }
    for (const char* kept : {artifact::graph, artifact::consensus, artifact::communities, artifact::stability})
        CHECK(fs::exists(dir / "out" / kept));
    CHECK_FALSE(fs::exists(dir / "out" / artifact::labels));

    io::write_file(dir / "bad.tsv", "list-without-user\n");
    InputPaths broken = inputs_in(dir.path());
    broken.memberships = dir / "bad.tsv";
    try {
        run_pipeline(small_config(), broken, dir / "out2");
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "build-graph");
        CHECK(e.code() == ExitCode::parse);
        CHECK(exit_code_for(e) == ExitCode::parse);
    }

    auto bad_cfg = small_config();
    bad_cfg.tau = 2.0;
    try {
        run_pipeline(bad_cfg, inputs_in(dir.path()), dir / "out3");
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "config");
        CHECK(e.code() == ExitCode::validation);
    }
    CHECK_FALSE(fs::exists(dir / "out3"));

    // a later stage with nothing to read fails cleanly
    CHECK_THROWS_AS(stage_consensus(small_config(), dir / "empty"), ParseError);
}

TEST_CASE("exit codes by error type") {
    CHECK(exit_code_for(ParseError("x")) == ExitCode::parse);
    CHECK(exit_code_for(ValidationError("x")) == ExitCode::validation);
    CHECK(exit_code_for(DomainError("x")) == ExitCode::validation);
    CHECK(exit_code_for(std::runtime_error("x")) == ExitCode::internal);
    CHECK(exit_code_for(StageError("s", ExitCode::parse, "x")) == ExitCode::parse);
}

TEST_CASE("min_core filtering needs a core file") {
    testutil::TempDir dir("pipe-core");
    write_small_benchmark(dir.path());
    auto cfg = small_config();
    cfg.min_core = 1;
    auto in = inputs_in(dir.path());
    CHECK(load_pipeline_corpus(cfg, in).list_count() == 80);
    cfg.min_size = 10;
    CHECK(load_pipeline_corpus(cfg, in).list_count() < 80);
    in.core.reset();
    CHECK_THROWS_AS((void)load_pipeline_corpus(cfg, in), ValidationError);
}

TEST_CASE("planted benchmark yields at least one consensus community per group") {
    testutil::TempDir dir("pipe-bench");
    PlantedSpec spec;
    spec.overlap = 0.1;
    const auto data = synth(spec, 42);
    write_synthetic(data, dir.path());
    auto cfg = small_config();
    cfg.runs = 10;
    cfg.fast_iterations = 20;
    run_pipeline(cfg, inputs_in(dir.path()), dir / "out");
    const auto nodes = io::read_file(dir / "out" / artifact::graph_nodes);
    std::vector<std::string> names;
    for (auto line : io::split_lines(nodes))
        if (!line.empty()) names.emplace_back(line);
    const auto communities = parse_communities(io::read_file(dir / "out" / artifact::communities), names);
    CHECK(communities.size() >= 8);
    const auto users = parse_user_reports(io::read_file(dir / "out" / artifact::users));
    CHECK(users.size() == communities.size());
    const auto eval = io::read_file(dir / "out" / artifact::eval);
    CHECK(eval.starts_with("category\tcategory_size\tprecision\trecall\tf1\tcommunity_id\n"));
}
