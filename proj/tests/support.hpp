#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <random>
#include <string>
#include <unistd.h>

#include "cascade/document.hpp"
#include "cascade/store.hpp"

namespace test {

namespace fs = std::filesystem;

// A fresh directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("cascade-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline cascade::ModelStore bundled_store() { return cascade::ModelStore(cascade::default_bundled_root()); }

inline cascade::CascadeModel model_of(std::initializer_list<double> values) {
    cascade::CascadeModel m{"constructed", 2043, {}, ""};
    int i = 0;
    for (double v : values) {
        cascade::Factor f;
        f.id = "f" + std::to_string(i++);
        f.label = f.id;
        f.probability = cascade::Probability(v);
        m.factors.push_back(f);
    }
    return m;
}

// Random model with 1..max_factors factors spread over the three groups;
// roughly one factor in ten is N/A.
inline cascade::CascadeModel random_model(std::mt19937_64& rng, int max_factors = 12) {
    std::uniform_int_distribution<int> count(1, max_factors);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> group(0, 2);
    cascade::CascadeModel m{"random", 2043, {}, ""};
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        cascade::Factor f;
        f.id = "r" + std::to_string(i);
        f.label = f.id;
        f.group = static_cast<cascade::FactorGroup>(group(rng));
        if (unit(rng) < 0.1) {
            f.probability = cascade::NotApplicable{};
        } else {
            f.probability = cascade::Probability(unit(rng));
        }
        m.factors.push_back(f);
    }
    return m;
}

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace test
