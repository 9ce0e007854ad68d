#pragma once

#include "modalrepair/gappy.hpp"
#include "modalrepair/interpolation.hpp"
#include "modalrepair/tensor.hpp"

#include <cstddef>
#include <vector>

namespace modalrepair {

struct SuperresConfig : IterationConfig {
    /// Target spatial shape; one entry per spatial axis of the input.
    Shape target_dims;
    /// Optional explicit stride per spatial axis. When empty, the stride is the
    /// largest s with (n - 1) * s <= N - 1, anchored at index 0.
    std::vector<std::size_t> strides;
    /// Optional explicit target index of every source sample per axis;
    /// overrides `strides`.
    std::vector<std::vector<std::size_t>> placement;
    FillStrategy init_strategy = FillStrategy::LinearInterp;
    InterpolationScheme scheme = InterpolationScheme::Triangulated;
    /// Insert a midpoint snapshot between every pair of input snapshots.
    bool enhance_time = false;
};

/// Resolves the per-axis placement of source samples on the target grid.
std::vector<std::vector<std::size_t>> resolve_placement(const Tensor& ds, const SuperresConfig& cfg);

/// NaN base tensor on the target grid carrying the source samples at their
/// placed positions; the mask flags every new point.
GappyData place_on_target(const Tensor& ds, const SuperresConfig& cfg);

/// Initial guess for the new points: piecewise-linear over the observed
/// spatial positions of each component and snapshot, mean value where the
/// interpolant does not reach, linear in time for snapshots with no samples.
Tensor interpolate_initial(const Tensor& base, const GapMask& mask,
                           InterpolationScheme scheme = InterpolationScheme::Triangulated, FillStats* stats = nullptr);

/// Full pipeline: place, initial guess, iterate truncated SVD/HOSVD with the
/// placed samples held fixed.
RepairResult superresolve(const Tensor& ds, const SuperresConfig& cfg);

}  // namespace modalrepair
