#pragma once

#include "modalrepair/decomposition.hpp"
#include "modalrepair/interpolation.hpp"
#include "modalrepair/tensor.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace modalrepair {

/// Stopping metric between successive gap values.
enum class ConvergenceMetric {
    /// (1 / N) * sqrt(sum |v_i - v_{i-1}|), the form used to stop the original method.
    Printed,
    /// sqrt(sum (v_i - v_{i-1})^2 / N).
    Rmse,
};

ConvergenceMetric parse_convergence_metric(const std::string& name);
std::string to_string(ConvergenceMetric m);

/// Convergence measure over the gap entries of two successive iterates.
double mse_gaps(std::span<const double> previous, std::span<const double> current);
double rmse_gaps(std::span<const double> previous, std::span<const double> current);

struct IterationConfig {
    /// One rule per tensor mode, or a single rule applied to every mode.
    std::vector<RankRule> rank_rules{RankRule::fixed(5)};
    double tolerance = 1e-6;
    std::size_t max_iterations = 500;
    bool record_trace = true;
    ConvergenceMetric metric = ConvergenceMetric::Printed;

    void validate() const;
};

struct GappyConfig : IterationConfig {
    FillStrategy init_strategy = FillStrategy::LinearInterp;
    InterpolationScheme scheme = InterpolationScheme::Triangulated;
};

struct RepairResult {
    Tensor repaired;
    std::size_t iterations = 0;
    std::vector<double> trace;  ///< one entry per iteration when recorded
    bool converged = false;
    Shape ranks;                ///< retained ranks of the last factorization
    FillStats fill;             ///< how the initial guess was built
};

/// Gap-filling initial guess (see fill_gaps).
Tensor initial_fill(const Tensor& data, const GapMask& mask, FillStrategy strategy,
                    InterpolationScheme scheme = InterpolationScheme::Triangulated, FillStats* stats = nullptr);

/// Truncated reconstruction of a complete tensor: SVD for order 2, HOSVD otherwise.
Tensor low_rank_reconstruct(const Tensor& t, std::span<const RankRule> rules, Shape* ranks = nullptr);

/// Repeats factorize -> reconstruct -> overwrite masked entries until the
/// metric drops to the tolerance or the iteration budget runs out. Entries
/// outside the mask are never written.
RepairResult iterate_masked(Tensor filled, const GapMask& mask, const IterationConfig& cfg);

/// Gappy SVD / HOSVD repair of `data` whose missing entries are flagged in `mask`.
RepairResult gappy_repair(const Tensor& data, const GapMask& mask, const GappyConfig& cfg);

}  // namespace modalrepair
