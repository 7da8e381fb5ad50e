#include "listcomm/labeling.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"

#include <algorithm>
#include <cmath>
#include <locale.h>
#include <unordered_map>
#include <wctype.h>

namespace listcomm {

namespace {

constexpr const char* kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and", "any",
    "are", "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between",
    "both", "but", "by", "can", "couldn", "d", "did", "didn", "do", "does", "doesn", "doing",
    "don", "down", "during", "each", "few", "for", "from", "further", "had", "hadn", "has", "hasn",
    "have", "haven", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
    "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just", "ll", "m", "ma",
    "me", "mightn", "more", "most", "mustn", "my", "myself", "needn", "no", "nor", "not", "now",
    "o", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
    "over", "own", "re", "s", "same", "shan", "she", "should", "shouldn", "so", "some", "such",
    "t", "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these",
    "they", "this", "those", "through", "to", "too", "under", "until", "up", "ve", "very", "was",
    "wasn", "we", "were", "weren", "what", "when", "where", "which", "while", "who", "whom", "why",
    "will", "with", "won", "wouldn", "y", "you", "your", "yours", "yourself", "yourselves", "also",
    "could", "would", "may", "might", "must", "shall", "us", "via", "etc", "among", "upon",
    "within", "without", "yet", "whose", "every",
};

// Character classes come from the C.UTF-8 locale when the platform has it;
// otherwise ASCII rules apply and every non-ASCII code point counts as a letter.
class CharClass {
public:
    CharClass() : locale_(newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr))) {}
    ~CharClass() {
        if (locale_ != static_cast<locale_t>(nullptr)) freelocale(locale_);
    }
    CharClass(const CharClass&) = delete;
    CharClass& operator=(const CharClass&) = delete;

    bool alnum(char32_t c) const {
        if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        if (locale_ == static_cast<locale_t>(nullptr)) return true;
        return iswalnum_l(static_cast<wint_t>(c), locale_) != 0;
    }
    char32_t lower(char32_t c) const {
        if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
        if (locale_ == static_cast<locale_t>(nullptr)) return c;
        return static_cast<char32_t>(towlower_l(static_cast<wint_t>(c), locale_));
    }

private:
    locale_t locale_;
};

const CharClass& char_class() {
    static const CharClass cc;
    return cc;
}

// Decodes one code point; invalid bytes decode to U+FFFD and advance by one.
char32_t next_code_point(std::string_view s, std::size_t& i) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 0;
    if (len == 0 || i + len > s.size() || !io::is_valid_utf8(s.substr(i, len))) {
        ++i;
        return 0xFFFD;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    i += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::vector<std::string> split_tokens(std::string_view text) {
    const CharClass& cc = char_class();
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = next_code_point(text, i);
        if (cc.alnum(cp)) {
            append_utf8(current, cc.lower(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

void field_terms(std::string_view text, const std::set<std::string>& stopwords, std::vector<std::string>& out) {
    const auto tokens = split_tokens(text);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const bool stop = stopwords.contains(tokens[i]);
        if (!stop) out.push_back(tokens[i]);
        if (i > 0 && !(stop && stopwords.contains(tokens[i - 1]))) out.push_back(tokens[i - 1] + ' ' + tokens[i]);
    }
}

} // namespace

std::set<std::string> default_stopwords() { return {std::begin(kStopwords), std::end(kStopwords)}; }

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    std::set<std::string> words;
    for (auto line : io::split_lines(text)) {
        if (!line.empty()) words.emplace(line);
    }
    return words;
}

std::vector<std::string> tokenize(std::string_view name, std::string_view description, const LabelingConfig& config) {
    std::vector<std::string> terms;
    field_terms(name, config.stopwords, terms);
    field_terms(description, config.stopwords, terms);
    return terms;
}

TermVectors build_vectors(const MembershipCorpus& corpus, const LabelingConfig& config) {
    const std::size_t l = corpus.list_count();
    std::vector<std::pair<std::string, std::map<std::string, std::uint32_t>>> counts;
    counts.reserve(l);
    std::map<std::string, std::uint32_t> df;
    for (const auto& [id, rec] : corpus.lists()) {
        auto& tf = counts.emplace_back(id, std::map<std::string, std::uint32_t>{}).second;
        for (auto& term : tokenize(rec.name, rec.description, config)) ++tf[term];
        for (const auto& [term, n] : tf) ++df[term];
    }

    TermVectors out;
    std::unordered_map<std::string, TermId> ids;
    for (const auto& [term, d] : df) {
        if (d == l) continue;
        ids.emplace(term, static_cast<TermId>(out.vocabulary.size()));
        out.vocabulary.push_back(term);
    }
    const double ld = static_cast<double>(l);
    for (auto& [id, tf] : counts) {
        ListVector vec;
        for (const auto& [term, n] : tf) {
            auto it = ids.find(term);
            if (it == ids.end()) continue;
            const double w = (1.0 + std::log10(static_cast<double>(n))) * std::log10(ld / static_cast<double>(df.at(term)));
            if (w > 0.0) vec.emplace_back(it->second, w);
        }
        out.by_list.emplace(id, std::move(vec)); // tf map iterates terms in sorted = id order
    }
    return out;
}

CommunityLabeler::CommunityLabeler(TermVectors vectors)
    : vectors_(std::move(vectors)), background_(vectors_.vocabulary.size(), 0.0) {
    for (const auto& [id, vec] : vectors_.by_list) {
        for (const auto& [t, w] : vec) background_[t] += w;
    }
    if (!vectors_.by_list.empty()) {
        const double l = static_cast<double>(vectors_.by_list.size());
        for (auto& b : background_) b /= l;
    }
}

std::vector<ScoredTerm> CommunityLabeler::label(const std::vector<std::string>& community, std::size_t top_k) const {
    if (community.empty()) throw DomainError("cannot label an empty community");
    std::vector<std::string> members(community);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    std::vector<double> centroid(vectors_.vocabulary.size(), 0.0);
    for (const auto& id : members) {
        auto it = vectors_.by_list.find(id);
        if (it == vectors_.by_list.end()) throw DomainError("unknown list id: " + id);
        for (const auto& [t, w] : it->second) centroid[t] += w;
    }
    const double c = static_cast<double>(members.size());
    std::vector<TermId> order(centroid.size());
    for (TermId t = 0; t < order.size(); ++t) {
        centroid[t] = centroid[t] / c - background_[t];
        order[t] = t;
    }
    const std::size_t k = std::min(top_k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](TermId x, TermId y) { return centroid[x] != centroid[y] ? centroid[x] > centroid[y] : x < y; });
    std::vector<ScoredTerm> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back({vectors_.vocabulary[order[i]], centroid[order[i]]});
    return out;
}

std::vector<ScoredTerm> label_community(const std::vector<std::string>& community, const TermVectors& vectors,
                                        const LabelingConfig& config) {
    if (config.top_k < 1) throw ValidationError("top_k must be >= 1");
    return CommunityLabeler(vectors).label(community, config.top_k);
}

} // namespace listcomm
