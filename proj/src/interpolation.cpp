#include "modalrepair/interpolation.hpp"

#include "modalrepair/delaunay.hpp"
#include "modalrepair/errors.hpp"
#include "modalrepair/log.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace modalrepair {

namespace {

// Entries still waiting for a value are flagged 1 in `pending`.

// Interpolates between consecutive nodes that already hold a value, so a pass
// can build on values filled by an earlier one.
void fill_line(std::span<double> field, std::span<std::uint8_t> pending, std::size_t offset, std::size_t stride,
               std::size_t length) {
    std::size_t prev = length;  // last known position, length = none yet
    for (std::size_t i = 0; i < length; ++i) {
        if (pending[offset + i * stride]) continue;
        if (prev != length && i > prev + 1) {
            const double a = field[offset + prev * stride];
            const double b = field[offset + i * stride];
            const double span = static_cast<double>(i - prev);
            for (std::size_t m = prev + 1; m < i; ++m) {
                const std::size_t idx = offset + m * stride;
                const double t = static_cast<double>(m - prev) / span;
                field[idx] = (1.0 - t) * a + t * b;
                pending[idx] = 0;
            }
        }
        prev = i;
    }
}

bool fill_multilinear(std::span<double> field, std::span<const std::uint8_t> observed,
                      std::span<std::uint8_t> pending, const Shape& dims) {
    const std::size_t nd = dims.size();
    std::vector<std::vector<std::size_t>> axes(nd);
    std::vector<std::vector<std::uint8_t>> on_axis(nd);
    for (std::size_t a = 0; a < nd; ++a) on_axis[a].assign(dims[a], 0);

    std::vector<std::size_t> idx(nd);
    std::size_t n_obs = 0;
    for (std::size_t flat = 0; flat < field.size(); ++flat) {
        if (!observed[flat]) continue;
        ++n_obs;
        std::size_t rem = flat;
        for (std::size_t a = nd; a-- > 0;) {
            on_axis[a][rem % dims[a]] = 1;
            rem /= dims[a];
        }
    }
    std::size_t lattice = 1;
    for (std::size_t a = 0; a < nd; ++a) {
        for (std::size_t i = 0; i < dims[a]; ++i)
            if (on_axis[a][i]) axes[a].push_back(i);
        lattice *= axes[a].size();
    }
    // Observed entries lie on the lattice by construction, so equal counts
    // means every lattice node is observed.
    if (n_obs != lattice) return false;

    std::array<std::size_t, 3> lo{}, hi{};
    std::array<double, 3> frac{};
    for (std::size_t flat = 0; flat < field.size(); ++flat) {
        if (!pending[flat]) continue;
        std::size_t rem = flat;
        for (std::size_t a = nd; a-- > 0;) {
            idx[a] = rem % dims[a];
            rem /= dims[a];
        }
        bool inside = true;
        for (std::size_t a = 0; a < nd && inside; ++a) {
            const auto& ax = axes[a];
            const auto it = std::lower_bound(ax.begin(), ax.end(), idx[a]);
            if (it == ax.end()) {
                inside = false;
            } else if (*it == idx[a]) {
                lo[a] = hi[a] = idx[a];
                frac[a] = 0.0;
            } else if (it == ax.begin()) {
                inside = false;
            } else {
                hi[a] = *it;
                lo[a] = *(it - 1);
                frac[a] = static_cast<double>(idx[a] - lo[a]) / static_cast<double>(hi[a] - lo[a]);
            }
        }
        if (!inside) continue;
        double value = 0.0;
        for (std::size_t corner = 0; corner < (std::size_t{1} << nd); ++corner) {
            double w = 1.0;
            std::size_t src = 0;
            for (std::size_t a = 0; a < nd; ++a) {
                const bool upper = (corner >> a) & 1U;
                w *= upper ? frac[a] : 1.0 - frac[a];
                src = src * dims[a] + (upper ? hi[a] : lo[a]);
            }
            if (w != 0.0) value += w * field[src];
        }
        field[flat] = value;
        pending[flat] = 0;
    }
    return true;
}

/// Barycentric fill on the Delaunay triangulation of the observed nodes of an
/// n0 x n1 plane whose entry (i0, i1) sits at base + (i0 * n1 + i1) * stride.
enum class PlaneFill { Done, Empty, Degenerate };

/// Returns Degenerate when the observed nodes are collinear (or fewer than
/// three) and Empty when the plane has no observed node at all.
PlaneFill fill_triangulated_plane(std::span<double> field, std::span<const std::uint8_t> observed,
                             std::span<std::uint8_t> pending, std::size_t n0, std::size_t n1, std::size_t base,
                             std::size_t stride) {
    auto at = [&](std::size_t i0, std::size_t i1) { return base + (i0 * n1 + i1) * stride; };

    std::vector<LatticePoint> pts;
    std::vector<double> vals;
    bool any_pending = false;
    for (std::size_t i0 = 0; i0 < n0; ++i0)
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
            const std::size_t f = at(i0, i1);
            if (observed[f]) {
                pts.push_back({static_cast<std::int64_t>(i0), static_cast<std::int64_t>(i1)});
                vals.push_back(field[f]);
            } else if (pending[f]) {
                any_pending = true;
            }
        }
    if (!any_pending) return PlaneFill::Done;
    if (pts.empty()) return PlaneFill::Empty;

    const DelaunayTriangulation tri(pts);
    if (tri.degenerate()) return PlaneFill::Degenerate;

    for (const auto& t : tri.triangles()) {
        const LatticePoint& a = pts[t[0]];
        const LatticePoint& b = pts[t[1]];
        const LatticePoint& c = pts[t[2]];
        const std::int64_t area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        if (area <= 0) continue;
        const std::int64_t x0 = std::min({a.x, b.x, c.x}), x1 = std::max({a.x, b.x, c.x});
        const std::int64_t y0 = std::min({a.y, b.y, c.y}), y1 = std::max({a.y, b.y, c.y});
        for (std::int64_t x = x0; x <= x1; ++x)
            for (std::int64_t y = y0; y <= y1; ++y) {
                const std::size_t f = at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
                if (!pending[f]) continue;
                const std::int64_t wa = (b.x - x) * (c.y - y) - (b.y - y) * (c.x - x);
                const std::int64_t wb = (c.x - x) * (a.y - y) - (c.y - y) * (a.x - x);
                const std::int64_t wc = (a.x - x) * (b.y - y) - (a.y - y) * (b.x - x);
                if (wa < 0 || wb < 0 || wc < 0) continue;
                const double inv = 1.0 / static_cast<double>(area);
                field[f] = (static_cast<double>(wa) * vals[t[0]] + static_cast<double>(wb) * vals[t[1]] +
                            static_cast<double>(wc) * vals[t[2]]) *
                           inv;
                pending[f] = 0;
            }
    }
    return PlaneFill::Done;
}

void fill_per_axis(std::span<double> field, std::span<std::uint8_t> pending, const Shape& dims) {
    // Lines along the fastest axis first, then the slower ones.
    const std::size_t nd = dims.size();
    for (std::size_t axis = nd; axis-- > 0;) {
        std::size_t stride = 1;
        for (std::size_t a = axis + 1; a < nd; ++a) stride *= dims[a];
        const std::size_t length = dims[axis];
        for (std::size_t flat = 0; flat < field.size(); ++flat) {
            if ((flat / stride) % length != 0) continue;  // start of a line along `axis`
            fill_line(field, pending, flat, stride, length);
        }
    }
}

}  // namespace

FillStrategy parse_fill_strategy(const std::string& name) {
    if (name == "zeros") return FillStrategy::Zeros;
    if (name == "mean") return FillStrategy::Mean;
    if (name == "interp" || name == "linear-interp" || name == "linear") return FillStrategy::LinearInterp;
    throw ArgumentError("unknown fill strategy '" + name + "' (expected zeros, mean or interp)");
}

std::string to_string(FillStrategy s) {
    switch (s) {
        case FillStrategy::Zeros: return "zeros";
        case FillStrategy::Mean: return "mean";
        case FillStrategy::LinearInterp: return "interp";
    }
    return "?";
}

InterpolationScheme parse_interpolation_scheme(const std::string& name) {
    if (name == "triangulated") return InterpolationScheme::Triangulated;
    if (name == "separable") return InterpolationScheme::Separable;
    throw ArgumentError("unknown interpolation scheme '" + name + "' (expected triangulated or separable)");
}

std::string to_string(InterpolationScheme s) {
    return s == InterpolationScheme::Triangulated ? "triangulated" : "separable";
}

FillStats linear_fill_field(std::span<double> field, std::span<const std::uint8_t> missing,
                            const Shape& spatial_dims, double fallback, InterpolationScheme scheme) {
    if (spatial_dims.empty() || spatial_dims.size() > 3)
        throw DimensionError("linear fill supports 1, 2 or 3 spatial axes");
    if (field.size() != shape_product(spatial_dims) || missing.size() != field.size())
        throw DimensionError("linear fill: field size does not match spatial dims");

    std::vector<std::uint8_t> observed(field.size());
    std::vector<std::uint8_t> pending(missing.begin(), missing.end());
    std::size_t n_missing = 0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        observed[i] = missing[i] ? 0 : 1;
        n_missing += missing[i] ? 1 : 0;
    }
    FillStats stats;
    if (n_missing == 0) return stats;

    const std::size_t nd = spatial_dims.size();
    bool done = false;
    if (nd > 1 && scheme == InterpolationScheme::Separable)
        done = fill_multilinear(field, observed, pending, spatial_dims);

    if (!done) {
        if (nd == 1) {
            fill_line(field, pending, 0, 1, spatial_dims[0]);
        } else if (nd == 2) {
            if (fill_triangulated_plane(field, observed, pending, spatial_dims[0], spatial_dims[1], 0, 1) ==
                PlaneFill::Degenerate) {
                ++stats.degenerate_fields;
                fill_per_axis(field, pending, spatial_dims);
            }
        } else {
            // Planes of constant third index, then lines along the third axis.
            const std::size_t n0 = spatial_dims[0], n1 = spatial_dims[1], n2 = spatial_dims[2];
            bool degenerate = false;
            for (std::size_t i2 = 0; i2 < n2; ++i2) {
                if (fill_triangulated_plane(field, observed, pending, n0, n1, i2, n2) != PlaneFill::Degenerate)
                    continue;
                degenerate = true;
                for (std::size_t i0 = 0; i0 < n0; ++i0) fill_line(field, pending, i0 * n1 * n2 + i2, n2, n1);
                for (std::size_t i1 = 0; i1 < n1; ++i1) fill_line(field, pending, i1 * n2 + i2, n1 * n2, n0);
            }
            if (degenerate) ++stats.degenerate_fields;
            const std::size_t planes = spatial_dims[0] * spatial_dims[1];
            for (std::size_t p = 0; p < planes; ++p) fill_line(field, pending, p * n2, 1, n2);
        }
    }

    for (std::size_t i = 0; i < field.size(); ++i) {
        if (!missing[i]) continue;
        if (pending[i]) {
            field[i] = fallback;
            ++stats.mean_fallback;
        } else {
            ++stats.interpolated;
        }
    }
    return stats;
}

Tensor fill_gaps(const Tensor& data, const GapMask& mask, FillStrategy strategy, InterpolationScheme scheme,
                 FillStats* stats, std::size_t min_observed) {
    require_snapshot_tensor(data);
    require_same_shape(data.dims(), mask.dims(), "fill_gaps mask");

    Tensor out = data;
    const std::size_t n_comp = data.components();
    const std::size_t n_space = data.spatial_size();
    const std::size_t n_time = data.snapshots();
    const Shape spatial = data.spatial_dims();

    std::vector<double> field(n_space);
    std::vector<std::uint8_t> missing(n_space);
    FillStats total;
    for (std::size_t c = 0; c < n_comp; ++c) {
        for (std::size_t k = 0; k < n_time; ++k) {
            std::size_t n_obs = 0;
            double sum = 0.0;
            bool any_missing = false;
            for (std::size_t s = 0; s < n_space; ++s) {
                const std::size_t f = data.snapshot_index(c, s, k);
                missing[s] = mask[f] ? 1 : 0;
                field[s] = data[f];
                if (mask[f]) {
                    any_missing = true;
                } else {
                    ++n_obs;
                    sum += data[f];
                }
            }
            if (!any_missing) continue;
            if (strategy == FillStrategy::Zeros) {
                for (std::size_t s = 0; s < n_space; ++s)
                    if (missing[s]) out[data.snapshot_index(c, s, k)] = 0.0;
                total.interpolated += static_cast<std::size_t>(std::count(missing.begin(), missing.end(), 1));
                continue;
            }
            if (n_obs < std::max<std::size_t>(min_observed, 1))
                throw ArgumentError("snapshot " + std::to_string(k) + " (component " + std::to_string(c) + ") has " +
                                    std::to_string(n_obs) + " observed entries; cannot fill by " + to_string(strategy));
            const double mean = sum / static_cast<double>(n_obs);
            if (strategy == FillStrategy::Mean) {
                for (std::size_t s = 0; s < n_space; ++s)
                    if (missing[s]) field[s] = mean;
                total.mean_fallback += n_space - n_obs;
            } else {
                total += linear_fill_field(field, missing, spatial, mean, scheme);
            }
            for (std::size_t s = 0; s < n_space; ++s)
                if (missing[s]) out[data.snapshot_index(c, s, k)] = field[s];
        }
    }
    if (total.degenerate_fields > 0)
        logger().warn("{} field(s) had collinear observed points; used per-axis linear interpolation",
                      total.degenerate_fields);
    if (stats) *stats = total;
    return out;
}

}  // namespace modalrepair
