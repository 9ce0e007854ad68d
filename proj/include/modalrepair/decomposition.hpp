#pragma once

#include "modalrepair/tensor.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace modalrepair {

/// How many singular values a truncation keeps.
class RankRule {
public:
    enum class Kind { Fixed, Threshold, Full };

    /// Keep exactly n values (clamped to the available count with a warning).
    static RankRule fixed(std::size_t n);
    /// Keep the smallest N with sigma[N] / sigma[0] <= epsilon, epsilon in (0, 1).
    static RankRule threshold(double epsilon);
    /// Keep everything.
    static RankRule full();

    Kind kind() const { return kind_; }
    std::size_t rank() const { return rank_; }
    double epsilon() const { return epsilon_; }

    /// Retained count for a non-increasing spectrum; always >= 1.
    std::size_t select(std::span<const double> sigma) const;

    std::string describe() const;

private:
    RankRule(Kind k, std::size_t r, double e) : kind_(k), rank_(r), epsilon_(e) {}

    Kind kind_;
    std::size_t rank_;
    double epsilon_;
};

/// Count of singular values above 1e-13 * sigma[0].
std::size_t numerical_rank(std::span<const double> sigma);

/// Truncated economy SVD  V ~= W diag(sigma) T^T.
struct TruncatedSVD {
    Eigen::MatrixXd modes;     ///< W, J x N, orthonormal columns
    Eigen::VectorXd sigma;     ///< N retained values, non-increasing
    Eigen::MatrixXd temporal;  ///< T, K x N, orthonormal columns
    Eigen::VectorXd spectrum;  ///< every singular value, for diagnostics

    std::size_t rank() const { return static_cast<std::size_t>(sigma.size()); }
};

/// Each column's entry of largest magnitude (first on ties) is made
/// non-negative; `partner` columns are flipped along with it when given.
void canonicalize_signs(Eigen::MatrixXd& vectors, Eigen::MatrixXd* partner = nullptr);

TruncatedSVD svd_truncated(const SnapshotMatrix& m, const RankRule& rule);
SnapshotMatrix svd_reconstruct(const TruncatedSVD& f);

/// Tucker form: tensor ~= core x_0 factors[0] x_1 factors[1] ... ; the last
/// factor holds the temporal modes.
struct TuckerDecomposition {
    Tensor core;
    std::vector<Eigen::MatrixXd> factors;
    std::vector<Eigen::VectorXd> sigma;  ///< full per-mode spectra

    Shape ranks() const { return core.dims(); }
};

/// One-pass HOSVD: factor l = leading left singular vectors of the mode-l
/// unfolding; core = tensor contracted with every factor transpose.
TuckerDecomposition hosvd(const Tensor& t, std::span<const RankRule> rules);
/// Same rule applied to every mode.
TuckerDecomposition hosvd(const Tensor& t, const RankRule& rule);

Tensor hosvd_reconstruct(const TuckerDecomposition& d);

/// Merges the spatial factors into the core, giving spatial modes
/// W[j1..jd-1, n] (one column per temporal mode) and temporal modes T[k, n]
/// such that the reconstruction is unfold-equal to W * T^T.
struct MergedTucker {
    Eigen::MatrixXd spatial;   ///< J x N
    Eigen::MatrixXd temporal;  ///< K x N
};
MergedTucker merge_spatial(const TuckerDecomposition& d);

// Persistence: one MFT file per factor plus manifest.json in `dir`.
void save(const std::filesystem::path& dir, const TruncatedSVD& f);
void save(const std::filesystem::path& dir, const TuckerDecomposition& d);
TruncatedSVD load_svd(const std::filesystem::path& dir);
TuckerDecomposition load_tucker(const std::filesystem::path& dir);

}  // namespace modalrepair
