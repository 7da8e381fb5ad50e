#pragma once

#include "listcomm/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace listcomm {

using TermId = std::uint32_t;

struct LabelingConfig {
    std::size_t top_k = 3;
    std::set<std::string> stopwords; // lowercase
};

// The shipped English stopword list (same content as data/stopwords.txt).
std::set<std::string> default_stopwords();
// One lowercase term per line; blank lines ignored.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// Lowercased tokens split on runs of non-alphanumeric code points (Unicode
// aware; non-ASCII letters survive). Unigrams drop stopwords; bigrams join
// adjacent tokens of the same field and are dropped only when both halves are
// stopwords. Name and description are tokenized separately.
std::vector<std::string> tokenize(std::string_view name, std::string_view description,
                                  const LabelingConfig& config);

// Sparse term weights, sorted by term id, no zeros.
using ListVector = std::vector<std::pair<TermId, double>>;

struct TermVectors {
    std::vector<std::string> vocabulary;           // sorted; TermId indexes it
    std::map<std::string, ListVector> by_list;     // every corpus list, possibly empty
};

// (1 + log10 tf) * log10(l / df); terms present in every list are dropped.
TermVectors build_vectors(const MembershipCorpus& corpus, const LabelingConfig& config);

struct ScoredTerm {
    std::string term;
    double score = 0.0;

    bool operator==(const ScoredTerm&) const = default;
};

// Centroid of the community's vectors minus the mean of all list vectors.
class CommunityLabeler {
public:
    explicit CommunityLabeler(TermVectors vectors);

    const TermVectors& vectors() const noexcept { return vectors_; }

    // Top `top_k` terms by score descending, ties lexicographic. Throws
    // DomainError for an empty community or an unknown list id.
    std::vector<ScoredTerm> label(const std::vector<std::string>& community, std::size_t top_k) const;

private:
    TermVectors vectors_;
    std::vector<double> background_;
};

std::vector<ScoredTerm> label_community(const std::vector<std::string>& community, const TermVectors& vectors,
                                        const LabelingConfig& config);

} // namespace listcomm
