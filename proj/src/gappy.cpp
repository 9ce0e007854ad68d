#include "modalrepair/gappy.hpp"

#include "modalrepair/errors.hpp"
#include "modalrepair/log.hpp"

#include <cmath>

namespace modalrepair {

ConvergenceMetric parse_convergence_metric(const std::string& name) {
    if (name == "printed") return ConvergenceMetric::Printed;
    if (name == "rmse") return ConvergenceMetric::Rmse;
    throw ArgumentError("unknown convergence metric '" + name + "' (expected printed or rmse)");
}

std::string to_string(ConvergenceMetric m) { return m == ConvergenceMetric::Printed ? "printed" : "rmse"; }

double mse_gaps(std::span<const double> previous, std::span<const double> current) {
    if (previous.size() != current.size()) throw DimensionError("mse_gaps: length mismatch");
    if (previous.empty()) throw ArgumentError("mse_gaps needs at least one gap");
    double sum = 0.0;
    for (std::size_t i = 0; i < previous.size(); ++i) sum += std::abs(current[i] - previous[i]);
    return std::sqrt(sum) / static_cast<double>(previous.size());
}

double rmse_gaps(std::span<const double> previous, std::span<const double> current) {
    if (previous.size() != current.size()) throw DimensionError("rmse_gaps: length mismatch");
    if (previous.empty()) throw ArgumentError("rmse_gaps needs at least one gap");
    double sum = 0.0;
    for (std::size_t i = 0; i < previous.size(); ++i) {
        const double d = current[i] - previous[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(previous.size()));
}

void IterationConfig::validate() const {
    if (!(tolerance > 0.0)) throw ArgumentError("tolerance must be positive");
    if (max_iterations < 1) throw ArgumentError("max_iterations must be >= 1");
    if (rank_rules.empty()) throw ArgumentError("at least one rank rule is required");
}

Tensor initial_fill(const Tensor& data, const GapMask& mask, FillStrategy strategy, InterpolationScheme scheme,
                    FillStats* stats) {
    return fill_gaps(data, mask, strategy, scheme, stats);
}

Tensor low_rank_reconstruct(const Tensor& t, std::span<const RankRule> rules, Shape* ranks) {
    if (rules.size() != 1 && rules.size() != t.order())
        throw ArgumentError("expected 1 or " + std::to_string(t.order()) + " rank rules, got " +
                            std::to_string(rules.size()));
    if (t.order() == 2) {
        const auto f = svd_truncated(unfold(t), rules[0]);
        if (ranks) *ranks = {f.rank()};
        return fold(svd_reconstruct(f), t.dims());
    }
    const std::vector<RankRule> per_mode =
        rules.size() == 1 ? std::vector<RankRule>(t.order(), rules[0]) : std::vector<RankRule>(rules.begin(), rules.end());
    const auto d = hosvd(t, per_mode);
    if (ranks) *ranks = d.ranks();
    return hosvd_reconstruct(d);
}

RepairResult iterate_masked(Tensor filled, const GapMask& mask, const IterationConfig& cfg) {
    cfg.validate();
    require_same_shape(filled.dims(), mask.dims(), "iterate_masked mask");
    if (!filled.all_finite()) throw NumericalError("initial guess contains non-finite values");

    const std::vector<std::size_t> gaps = mask.gap_indices();
    RepairResult result;
    if (gaps.empty()) {
        result.repaired = std::move(filled);
        result.converged = true;
        return result;
    }

    std::vector<double> previous(gaps.size()), current(gaps.size());
    for (std::size_t g = 0; g < gaps.size(); ++g) previous[g] = filled[gaps[g]];

    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        const Tensor recon = low_rank_reconstruct(filled, cfg.rank_rules, &result.ranks);
        for (std::size_t g = 0; g < gaps.size(); ++g) {
            const double v = recon[gaps[g]];
            if (!std::isfinite(v)) throw NumericalError("reconstruction diverged at iteration " + std::to_string(it));
            current[g] = v;
            filled[gaps[g]] = v;
        }
        const double err = cfg.metric == ConvergenceMetric::Printed ? mse_gaps(previous, current)
                                                                    : rmse_gaps(previous, current);
        if (!std::isfinite(err)) throw NumericalError("convergence metric diverged at iteration " + std::to_string(it));
        result.iterations = it;
        if (cfg.record_trace) result.trace.push_back(err);
        logger().debug("iteration {}: {:.3e}", it, err);
        if (err <= cfg.tolerance) {
            result.converged = true;
            break;
        }
        previous.swap(current);
    }
    if (!result.converged)
        logger().info("no convergence after {} iterations (tolerance {:.1e})", cfg.max_iterations, cfg.tolerance);
    result.repaired = std::move(filled);
    return result;
}

RepairResult gappy_repair(const Tensor& data, const GapMask& mask, const GappyConfig& cfg) {
    require_snapshot_tensor(data);
    require_same_shape(data.dims(), mask.dims(), "gappy_repair mask");
    cfg.validate();
    if (mask.size() > 0 && mask.count() == mask.size()) throw ArgumentError("every entry is missing");

    FillStats stats;
    Tensor filled = initial_fill(data, mask, cfg.init_strategy, cfg.scheme, &stats);
    auto result = iterate_masked(std::move(filled), mask, cfg);
    result.fill = stats;
    return result;
}

}  // namespace modalrepair
