#pragma once

#include "listcomm/corpus.hpp"

#include <atomic>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <unistd.h>
#include <utility>

namespace testutil {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("listcomm-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Corpus from (list, user) pairs.
inline listcomm::MembershipCorpus corpus_of(std::initializer_list<std::pair<const char*, const char*>> rows) {
    listcomm::CorpusBuilder b;
    for (const auto& [list, user] : rows) b.add_membership(list, user);
    return std::move(b).build();
}

} // namespace testutil
