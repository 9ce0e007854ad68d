#include "modalrepair/superres.hpp"

#include "modalrepair/errors.hpp"

#include <algorithm>

namespace modalrepair {

std::vector<std::vector<std::size_t>> resolve_placement(const Tensor& ds, const SuperresConfig& cfg) {
    require_snapshot_tensor(ds);
    const Shape source = ds.spatial_dims();
    const Shape& target = cfg.target_dims;
    if (target.size() != source.size())
        throw DimensionError("target has " + std::to_string(target.size()) + " spatial axes, input has " +
                             std::to_string(source.size()));

    std::vector<std::vector<std::size_t>> placement(source.size());
    for (std::size_t a = 0; a < source.size(); ++a) {
        const std::size_t n = source[a], big = target[a];
        if (big < n)
            throw DimensionError("target axis " + std::to_string(a) + " (" + std::to_string(big) +
                                 ") is smaller than the input axis (" + std::to_string(n) + ")");
        auto& pos = placement[a];
        if (!cfg.placement.empty()) {
            if (cfg.placement.size() != source.size()) throw ArgumentError("placement needs one list per spatial axis");
            pos = cfg.placement[a];
            if (pos.size() != n) throw ArgumentError("placement list for axis " + std::to_string(a) + " has wrong length");
        } else {
            std::size_t stride = 1;
            if (!cfg.strides.empty()) {
                if (cfg.strides.size() != source.size()) throw ArgumentError("strides need one value per spatial axis");
                stride = cfg.strides[a];
            } else if (n > 1) {
                stride = (big - 1) / (n - 1);
            }
            if (stride == 0) throw ArgumentError("stride must be positive");
            pos.resize(n);
            for (std::size_t i = 0; i < n; ++i) pos[i] = i * stride;
        }
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (pos[i] >= big)
                throw DimensionError("placement index " + std::to_string(pos[i]) + " out of range on axis " +
                                     std::to_string(a));
            if (i > 0 && pos[i] <= pos[i - 1])
                throw ArgumentError("placement on axis " + std::to_string(a) + " collides or is not increasing");
        }
    }
    return placement;
}

GappyData place_on_target(const Tensor& ds, const SuperresConfig& cfg) {
    const auto placement = resolve_placement(ds, cfg);
    const Shape& target = cfg.target_dims;
    const std::size_t n_comp = ds.components();
    const std::size_t k_in = ds.snapshots();
    const std::size_t k_out = cfg.enhance_time && k_in > 1 ? 2 * k_in - 1 : k_in;
    const std::size_t time_step = k_out == k_in ? 1 : 2;

    Shape dims;
    if (ds.order() == 2) {
        dims = {target[0], k_out};
    } else {
        dims.push_back(n_comp);
        dims.insert(dims.end(), target.begin(), target.end());
        dims.push_back(k_out);
    }
    GappyData out{Tensor(dims, kMissing), GapMask(dims, true)};

    const Shape source = ds.spatial_dims();
    const std::size_t n_axes = source.size();
    const std::size_t n_src = ds.spatial_size();
    const std::size_t n_dst = shape_product(target);
    std::vector<std::size_t> idx(n_axes);
    for (std::size_t s = 0; s < n_src; ++s) {
        std::size_t rem = s;
        for (std::size_t a = n_axes; a-- > 0;) {
            idx[a] = rem % source[a];
            rem /= source[a];
        }
        std::size_t dst = 0;
        for (std::size_t a = 0; a < n_axes; ++a) dst = dst * target[a] + placement[a][idx[a]];
        for (std::size_t c = 0; c < n_comp; ++c)
            for (std::size_t k = 0; k < k_in; ++k) {
                const std::size_t f = (c * n_dst + dst) * k_out + k * time_step;
                out.data[f] = ds[ds.snapshot_index(c, s, k)];
                out.mask.set(f, false);
            }
    }
    return out;
}

Tensor interpolate_initial(const Tensor& base, const GapMask& mask, InterpolationScheme scheme, FillStats* stats) {
    require_snapshot_tensor(base);
    require_same_shape(base.dims(), mask.dims(), "interpolate_initial mask");
    const std::size_t n_comp = base.components();
    const std::size_t n_space = base.spatial_size();
    const std::size_t n_time = base.snapshots();

    // Snapshots without any sample (inserted time levels) are filled in time afterwards.
    std::vector<std::uint8_t> sampled(n_comp * n_time, 0);
    GapMask spatial_mask = mask;
    for (std::size_t c = 0; c < n_comp; ++c)
        for (std::size_t k = 0; k < n_time; ++k) {
            for (std::size_t s = 0; s < n_space && !sampled[c * n_time + k]; ++s)
                if (!mask[base.snapshot_index(c, s, k)]) sampled[c * n_time + k] = 1;
            if (!sampled[c * n_time + k])
                for (std::size_t s = 0; s < n_space; ++s) spatial_mask.set(base.snapshot_index(c, s, k), false);
        }

    Tensor filled = fill_gaps(base, spatial_mask, FillStrategy::LinearInterp, scheme, stats,
                              n_space > 1 ? 2 : 1);

    for (std::size_t c = 0; c < n_comp; ++c) {
        for (std::size_t k = 0; k < n_time; ++k) {
            if (sampled[c * n_time + k]) continue;
            std::size_t lo = k, hi = k;
            while (lo > 0 && !sampled[c * n_time + lo]) --lo;
            while (hi + 1 < n_time && !sampled[c * n_time + hi]) ++hi;
            const bool has_lo = sampled[c * n_time + lo] != 0;
            const bool has_hi = sampled[c * n_time + hi] != 0;
            if (!has_lo && !has_hi)
                throw ArgumentError("component " + std::to_string(c) + " has no sampled snapshot");
            for (std::size_t s = 0; s < n_space; ++s) {
                const double a = filled[base.snapshot_index(c, s, lo)];
                const double b = filled[base.snapshot_index(c, s, hi)];
                double v;
                if (has_lo && has_hi) {
                    const double t = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
                    v = (1.0 - t) * a + t * b;
                } else {
                    v = has_lo ? a : b;
                }
                filled[base.snapshot_index(c, s, k)] = v;
            }
        }
    }
    return filled;
}

RepairResult superresolve(const Tensor& ds, const SuperresConfig& cfg) {
    cfg.validate();
    const auto base = place_on_target(ds, cfg);
    if (base.mask.count() == 0) {
        RepairResult r;
        r.repaired = base.data;
        r.converged = true;
        return r;
    }
    FillStats stats;
    Tensor filled = cfg.init_strategy == FillStrategy::LinearInterp
                        ? interpolate_initial(base.data, base.mask, cfg.scheme, &stats)
                        : fill_gaps(base.data, base.mask, cfg.init_strategy, cfg.scheme, &stats);
    auto result = iterate_masked(std::move(filled), base.mask, cfg);
    result.fill = stats;
    return result;
}

}  // namespace modalrepair
