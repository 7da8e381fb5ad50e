#pragma once

#include "listcomm/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace listcomm {

// Planted-community benchmark: g groups of users, each curated by its own
// lists, with controllable noise and multi-group users.
struct PlantedSpec {
    std::uint32_t groups = 8;
    std::uint32_t users_per_group = 25;
    std::uint32_t lists_per_group = 40;
    std::uint32_t min_list_size = 5;
    std::uint32_t max_list_size = 15;
    double noise = 0.1;   // chance a list slot is filled from outside its group
    double overlap = 0.0; // fraction of users that also belong to a second group
    // In-group picks favour popular users: the r-th member of a group (r from 1)
    // is drawn with weight r^-popularity. 0 gives uniform picks.
    double popularity = 1.5;
    // Words for list names per group; built-in sport vocabularies when empty.
    std::vector<std::vector<std::string>> vocabulary;
};

// Throws ValidationError for an infeasible spec.
void validate(const PlantedSpec& spec);

struct SyntheticCorpus {
    MembershipCorpus corpus;
    GroundTruth truth;                              // group name -> users (both groups for overlap users)
    UserSet core;                                   // every generated user
    std::map<std::string, std::string> list_group; // list id -> group name
    std::set<std::string> clean_lists;             // lists with no out-of-group member
    std::vector<std::string> group_names;           // index = group
};

SyntheticCorpus synth(const PlantedSpec& spec, std::uint64_t seed);

// memberships.tsv, lists.jsonl, groundtruth.tsv, core.txt and planted.tsv
// (`list_id<TAB>group<TAB>clean`) under `dir`.
void write_synthetic(const SyntheticCorpus& data, const std::filesystem::path& dir);

} // namespace listcomm
