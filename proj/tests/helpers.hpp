#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cadkit/common.hpp"
#include "cadkit/corpus.hpp"

namespace testutil {

inline std::string source_dir() { return CADKIT_SOURCE_DIR; }
inline std::string lexica_dir() { return source_dir() + "/data/lexicons"; }
inline std::string cli_bin() { return CADKIT_BIN; }

// Fresh scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("cadkit_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline cadkit::LabeledExample example(const std::string& id, const std::string& text,
                                      int label, cadkit::Origin origin,
                                      const std::string& pair_id) {
    cadkit::LabeledExample ex;
    ex.doc.id = id;
    ex.doc.text = text;
    ex.label = label;
    ex.origin = origin;
    ex.pair_id = pair_id;
    return ex;
}

// A corpus of `n_pairs` pairs plus `n_single` unpaired originals per class.
inline cadkit::Corpus paired_corpus(std::size_t n_pairs, std::size_t n_single = 0) {
    std::vector<cadkit::LabeledExample> rows;
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const int label = static_cast<int>(i % 2);
        const std::string pid = "p" + std::to_string(i);
        rows.push_back(example("o" + std::to_string(i),
                               label ? "good token" : "bad token", label,
                               cadkit::Origin::original, pid));
        rows.push_back(example("c" + std::to_string(i),
                               label ? "bad token" : "good token", 1 - label,
                               cadkit::Origin::counterfactual, pid));
    }
    for (std::size_t i = 0; i < n_single; ++i) {
        rows.push_back(example("u1" + std::to_string(i), "good extra", 1,
                               cadkit::Origin::original, ""));
        rows.push_back(example("u0" + std::to_string(i), "bad extra", 0,
                               cadkit::Origin::original, ""));
    }
    return cadkit::from_examples(std::move(rows));
}

}  // namespace testutil
