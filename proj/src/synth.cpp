#include "listcomm/synth.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace listcomm {

namespace {

const std::vector<std::vector<std::string>>& builtin_vocabulary() {
    static const std::vector<std::vector<std::string>> vocab = {
        {"badminton", "shuttlers", "badders", "smash"},
        {"fencing", "fencers", "schermers", "epee"},
        {"rowing", "rowers", "roeien", "regatta"},
        {"sailing", "sailors", "zeilen", "dinghy"},
        {"judo", "judoka", "dojo", "ippon"},
        {"hockey", "sticks", "hockeyspelers", "astro"},
        {"diving", "divers", "tuffi", "springboard"},
        {"cycling", "wielrennen", "ciclismo", "peloton"},
        {"boxing", "boxers", "boxeo", "ringside"},
        {"archery", "archers", "bogenschiessen", "longbow"},
        {"triathlon", "triathletes", "ironman", "transition"},
        {"canoeing", "canoe", "kayak", "slalom"},
        {"gymnastics", "gymnasts", "turnen", "vault"},
        {"swimming", "swimmers", "nuoto", "freestyle"},
        {"athletics", "sprinters", "hardlopen", "marathon"},
        {"equestrian", "dressage", "eventing", "showjumping"},
    };
    return vocab;
}

const std::vector<std::string>& generic_words() {
    static const std::vector<std::string> words = {"olympic", "london", "2012", "athletes", "team",
                                                   "news",    "official", "gb", "sport", "world"};
    return words;
}

std::string padded(const char* prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, value);
    return buf;
}

int width_for(std::size_t count) {
    int w = 1;
    for (std::size_t v = count > 0 ? count - 1 : 0; v >= 10; v /= 10) ++w;
    return std::max(w, 3);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(rng.below(items.size()))];
}

} // namespace

void validate(const PlantedSpec& s) {
    if (s.groups < 1) throw ValidationError("synth: groups must be >= 1");
    if (s.users_per_group < 1) throw ValidationError("synth: users_per_group must be >= 1");
    if (s.lists_per_group < 1) throw ValidationError("synth: lists_per_group must be >= 1");
    if (s.min_list_size < 1 || s.min_list_size > s.max_list_size)
        throw ValidationError("synth: need 1 <= min_list_size <= max_list_size");
    if (s.max_list_size > s.users_per_group)
        throw ValidationError("synth: max_list_size exceeds users_per_group");
    if (!(s.noise >= 0.0 && s.noise < 1.0)) throw ValidationError("synth: noise must lie in [0, 1)");
    if (!(s.overlap >= 0.0 && s.overlap < 1.0)) throw ValidationError("synth: overlap must lie in [0, 1)");
    if (!(s.popularity >= 0.0 && s.popularity <= 10.0)) throw ValidationError("synth: popularity must lie in [0, 10]");
    if (s.groups < 2 && (s.noise > 0.0 || s.overlap > 0.0))
        throw ValidationError("synth: noise and overlap need at least 2 groups");
    if (!s.vocabulary.empty() && s.vocabulary.size() < s.groups)
        throw ValidationError("synth: vocabulary must cover every group");
    for (const auto& words : s.vocabulary) {
        if (words.empty()) throw ValidationError("synth: empty group vocabulary");
    }
}

SyntheticCorpus synth(const PlantedSpec& spec, std::uint64_t seed) {
    validate(spec);
    Rng rng(seed);
    const std::size_t g = spec.groups;
    const std::size_t total_users = g * spec.users_per_group;
    const std::size_t total_lists = g * spec.lists_per_group;

    std::vector<std::vector<std::string>> vocab(g);
    for (std::size_t k = 0; k < g; ++k) {
        if (!spec.vocabulary.empty()) {
            vocab[k] = spec.vocabulary[k];
        } else if (k < builtin_vocabulary().size()) {
            vocab[k] = builtin_vocabulary()[k];
        } else {
            const std::string base = "topic" + std::to_string(k);
            vocab[k] = {base, base + "fans", base + "pros", base + "club"};
        }
    }

    SyntheticCorpus out;
    for (std::size_t k = 0; k < g; ++k) {
        std::string name = vocab[k].front();
        if (std::find(out.group_names.begin(), out.group_names.end(), name) != out.group_names.end())
            name += "-" + std::to_string(k);
        out.group_names.push_back(name);
    }

    // Shuffled ids so that id order carries no group information.
    std::vector<std::size_t> user_perm(total_users);
    std::iota(user_perm.begin(), user_perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(user_perm));
    std::vector<std::string> user_ids(total_users);
    const int uw = width_for(total_users);
    for (std::size_t u = 0; u < total_users; ++u) user_ids[u] = padded("user", user_perm[u], uw);

    // Primary group of user u is u / users_per_group.
    std::vector<std::vector<std::size_t>> pool(g);
    for (std::size_t u = 0; u < total_users; ++u) pool[u / spec.users_per_group].push_back(u);
    std::vector<std::vector<std::size_t>> groups_of(total_users);
    for (std::size_t u = 0; u < total_users; ++u) groups_of[u].push_back(u / spec.users_per_group);

    const auto overlap_count = static_cast<std::size_t>(std::llround(spec.overlap * static_cast<double>(total_users)));
    if (overlap_count > 0) {
        std::vector<std::size_t> chosen(total_users);
        std::iota(chosen.begin(), chosen.end(), 0);
        rng.shuffle(std::span<std::size_t>(chosen));
        for (std::size_t i = 0; i < overlap_count; ++i) {
            const std::size_t u = chosen[i];
            const std::size_t primary = u / spec.users_per_group;
            std::size_t second = static_cast<std::size_t>(rng.below(g - 1));
            if (second >= primary) ++second;
            groups_of[u].push_back(second);
            pool[second].push_back(u);
        }
    }
    for (std::size_t u = 0; u < total_users; ++u) {
        out.core.insert(user_ids[u]);
        for (std::size_t k : groups_of[u]) out.truth.categories[out.group_names[k]].insert(user_ids[u]);
    }

    std::vector<std::size_t> list_perm(total_lists);
    std::iota(list_perm.begin(), list_perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(list_perm));
    const int lw = width_for(total_lists);

    CorpusBuilder builder;
    std::vector<char> taken(total_users, 0);
    for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t i = 0; i < spec.lists_per_group; ++i) {
            const std::size_t index = k * spec.lists_per_group + i;
            const std::string list_id = padded("list", list_perm[index], lw);
            const std::size_t size =
                spec.min_list_size + static_cast<std::size_t>(rng.below(spec.max_list_size - spec.min_list_size + 1));

            std::vector<std::size_t> members;
            bool clean = true;
            std::vector<double> weight(pool[k].size());
            for (std::size_t r = 0; r < weight.size(); ++r)
                weight[r] = std::pow(static_cast<double>(r + 1), -spec.popularity);
            while (members.size() < size) {
                const bool from_outside = rng.uniform() < spec.noise;
                double mass = 0.0;
                for (std::size_t r = 0; r < weight.size(); ++r) {
                    if (!taken[pool[k][r]]) mass += weight[r];
                }
                if (!from_outside && mass > 0.0) {
                    double target = rng.uniform() * mass;
                    std::size_t r = 0;
                    std::size_t last = 0;
                    for (; r < weight.size(); ++r) {
                        if (taken[pool[k][r]]) continue;
                        last = r;
                        if (target < weight[r]) break;
                        target -= weight[r];
                    }
                    const std::size_t u = pool[k][r < weight.size() ? r : last];
                    taken[u] = 1;
                    members.push_back(u);
                } else {
                    const std::size_t u = static_cast<std::size_t>(rng.below(total_users));
                    const bool in_group = std::find(groups_of[u].begin(), groups_of[u].end(), k) != groups_of[u].end();
                    if (in_group || taken[u]) continue;
                    taken[u] = 1;
                    members.push_back(u);
                    clean = false;
                }
            }
            for (std::size_t u : members) {
                taken[u] = 0;
                builder.add_membership(list_id, user_ids[u]);
            }

            const auto& words = vocab[k];
            std::string name = pick(rng, words);
            if (rng.uniform() < 0.5) name += " " + pick(rng, words);
            if (rng.uniform() < 0.5) name += " " + pick(rng, generic_words());
            std::string description;
            const std::size_t desc_words = 2 + static_cast<std::size_t>(rng.below(4));
            for (std::size_t w = 0; w < desc_words; ++w) {
                if (w) description += ' ';
                description += rng.uniform() < 0.5 ? pick(rng, words) : pick(rng, generic_words());
            }
            builder.add_list({list_id, name, description});
            out.list_group.emplace(list_id, out.group_names[k]);
            if (clean) out.clean_lists.insert(list_id);
        }
    }
    out.corpus = std::move(builder).build();
    return out;
}

void write_synthetic(const SyntheticCorpus& data, const std::filesystem::path& dir) {
    write_corpus(data.corpus, dir / "memberships.tsv", dir / "lists.jsonl");
    io::write_file(dir / "groundtruth.tsv", format_ground_truth(data.truth));
    std::string core;
    for (const auto& u : data.core) core += u + '\n';
    io::write_file(dir / "core.txt", core);
    std::string planted;
    for (const auto& [list, group] : data.list_group)
        planted += list + '\t' + group + '\t' + (data.clean_lists.contains(list) ? "1" : "0") + '\n';
    io::write_file(dir / "planted.tsv", planted);
}

} // namespace listcomm
