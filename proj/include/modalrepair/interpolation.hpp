#pragma once

#include "modalrepair/tensor.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace modalrepair {

enum class FillStrategy { Zeros, Mean, LinearInterp };

/// How piecewise-linear fills are built on 2-D and 3-D grids.
enum class InterpolationScheme {
    /// Delaunay triangulation of the observed points, barycentric weights per triangle.
    Triangulated,
    /// Separable multilinear interpolation when the observed points form a full
    /// sub-lattice; otherwise falls back to Triangulated.
    Separable,
};

FillStrategy parse_fill_strategy(const std::string& name);
std::string to_string(FillStrategy s);
InterpolationScheme parse_interpolation_scheme(const std::string& name);
std::string to_string(InterpolationScheme s);

struct FillStats {
    std::size_t interpolated = 0;
    std::size_t mean_fallback = 0;
    std::size_t degenerate_fields = 0;  ///< fields that used the per-axis fallback

    FillStats& operator+=(const FillStats& o) {
        interpolated += o.interpolated;
        mean_fallback += o.mean_fallback;
        degenerate_fields += o.degenerate_fields;
        return *this;
    }
};

/// Fills the missing entries of one spatial field stored row-major over
/// `spatial_dims` (1, 2 or 3 axes). Points the interpolant cannot reach are
/// set to `fallback`. Requires at least one observed entry.
FillStats linear_fill_field(std::span<double> field, std::span<const std::uint8_t> missing,
                            const Shape& spatial_dims, double fallback, InterpolationScheme scheme);

/// Fills every gap of a snapshot tensor per component and per snapshot.
/// Observed entries are copied unchanged. Throws ArgumentError naming the
/// snapshot when a mean/interp fill has no observed entry to work from.
Tensor fill_gaps(const Tensor& data, const GapMask& mask, FillStrategy strategy,
                 InterpolationScheme scheme = InterpolationScheme::Triangulated, FillStats* stats = nullptr,
                 std::size_t min_observed = 1);

}  // namespace modalrepair
