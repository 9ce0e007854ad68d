#pragma once

#include "modalrepair/random.hpp"
#include "modalrepair/synthetic.hpp"
#include "modalrepair/tensor.hpp"

#include <unistd.h>

#include <filesystem>
#include <string>

namespace testutil {

inline modalrepair::Tensor random_tensor(modalrepair::Shape dims, std::uint64_t seed) {
    modalrepair::Tensor t(std::move(dims));
    modalrepair::random::SplitMix rng(seed);
    for (auto& v : t.data()) v = 2.0 * rng.uniform() - 1.0;
    return t;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Eigen::MatrixXd m(rows, cols);
    modalrepair::random::SplitMix rng(seed);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 2.0 * rng.uniform() - 1.0;
    return m;
}

// Rank-3 standing-wave field on an nx x ny grid.
inline modalrepair::synthetic::WaveSpec rank3_spec(std::size_t nx, std::size_t ny, std::size_t snapshots) {
    modalrepair::synthetic::WaveSpec s;
    s.grid = {nx, ny};
    s.snapshots = snapshots;
    s.dt = 0.05;
    s.modes = {{1.0, 1, 1, 1, 1.0, 0.0, 0}, {0.6, 2, 3, 1, 2.3, 0.4, 0}, {0.3, 3, 2, 1, 3.7, 1.1, 0}};
    return s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("modalrepair_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(reinterpret_cast<std::uintptr_t>(this)));
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

}  // namespace testutil
