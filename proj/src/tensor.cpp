#include "modalrepair/tensor.hpp"

#include "modalrepair/errors.hpp"
#include "modalrepair/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace modalrepair {

namespace {

std::string shape_string(const Shape& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

struct Split {
    std::size_t outer, extent, inner;
};

Split split_at(const Shape& dims, std::size_t mode) {
    Split s{1, dims[mode], 1};
    for (std::size_t i = 0; i < mode; ++i) s.outer *= dims[i];
    for (std::size_t i = mode + 1; i < dims.size(); ++i) s.inner *= dims[i];
    return s;
}

using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMapMut = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

std::size_t shape_product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

Tensor::Tensor(Shape dims, double fill) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("tensor must have at least one axis");
    for (auto d : dims_)
        if (d == 0) throw DimensionError("tensor dims must be positive, got " + shape_string(dims_));
    data_.assign(shape_product(dims_), fill);
    cache_layout();
}

Tensor::Tensor(Shape dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
    if (dims_.empty()) throw DimensionError("tensor must have at least one axis");
    for (auto d : dims_)
        if (d == 0) throw DimensionError("tensor dims must be positive, got " + shape_string(dims_));
    if (shape_product(dims_) != data_.size())
        throw DimensionError("tensor data length " + std::to_string(data_.size()) + " does not match dims " +
                             shape_string(dims_));
    cache_layout();
}

void Tensor::cache_layout() {
    spatial_size_ = dims_.size() >= 2 ? shape_product(dims_) / dims_.back() / components() : 0;
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size()) throw DimensionError("index order does not match tensor order");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (index[i] >= dims_[i]) throw DimensionError("index out of range on axis " + std::to_string(i));
        flat = flat * dims_[i] + index[i];
    }
    return flat;
}

double Tensor::at(std::span<const std::size_t> index) const { return data_[flat_index(index)]; }
double& Tensor::at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }

std::size_t Tensor::components() const { return dims_.size() >= 3 ? dims_.front() : 1; }

Shape Tensor::spatial_dims() const {
    if (dims_.size() == 2) return {dims_[0]};
    if (dims_.size() < 2) return {};
    return Shape(dims_.begin() + 1, dims_.end() - 1);
}

std::size_t Tensor::spatial_size() const { return spatial_size_; }

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool operator==(const Tensor& a, const Tensor& b) {
    if (a.dims_ != b.dims_) return false;
    // Bitwise comparison so NaN gaps compare equal to themselves.
    return std::equal(a.data_.begin(), a.data_.end(), b.data_.begin(), [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    });
}

void require_snapshot_tensor(const Tensor& t) {
    if (t.order() < 2 || t.order() > 5)
        throw DimensionError("snapshot tensors have order 2..5, got order " + std::to_string(t.order()));
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
    if (a != b) throw DimensionError(std::string(what) + ": shape " + shape_string(a) + " vs " + shape_string(b));
}

GapMask::GapMask(Shape dims, bool value) : dims_(std::move(dims)) {
    mask_.assign(shape_product(dims_), value ? 1 : 0);
}

GapMask::GapMask(Shape dims, std::vector<std::uint8_t> mask) : dims_(std::move(dims)), mask_(std::move(mask)) {
    if (shape_product(dims_) != mask_.size()) throw DimensionError("mask length does not match dims");
}

GapMask GapMask::from_nan(const Tensor& t) {
    GapMask m(t.dims());
    for (std::size_t i = 0; i < t.size(); ++i) m.mask_[i] = std::isnan(t[i]) ? 1 : 0;
    return m;
}

std::size_t GapMask::count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

double GapMask::fraction() const {
    return mask_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(mask_.size());
}

std::vector<std::size_t> GapMask::gap_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (mask_[i]) out.push_back(i);
    return out;
}

SnapshotMatrix unfold(const Tensor& t) {
    if (t.order() < 2) throw DimensionError("unfold needs a time axis");
    const std::size_t k = t.dims().back();
    const std::size_t j = t.size() / k;
    return RowMajorMap(t.data().data(), static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
}

Tensor fold(const SnapshotMatrix& m, const Shape& dims) {
    if (dims.size() < 2) throw DimensionError("fold needs at least two dims");
    const std::size_t k = dims.back();
    const std::size_t j = shape_product(std::span(dims).first(dims.size() - 1));
    if (static_cast<std::size_t>(m.rows()) != j || static_cast<std::size_t>(m.cols()) != k)
        throw DimensionError("cannot fold " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " matrix into dims " + shape_string(dims));
    Tensor out(dims);
    RowMajorMapMut(out.data().data(), m.rows(), m.cols()) = m;
    return out;
}

Eigen::MatrixXd mode_unfold(const Tensor& t, std::size_t mode) {
    if (mode >= t.order())
        throw DimensionError("mode " + std::to_string(mode) + " out of range for order " + std::to_string(t.order()));
    const auto [outer, extent, inner] = split_at(t.dims(), mode);
    Eigen::MatrixXd out(extent, outer * inner);
    const double* src = t.data().data();
    for (std::size_t o = 0; o < outer; ++o)
        out.middleCols(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner)) =
            RowMajorMap(src + o * extent * inner, extent, inner);
    return out;
}

Tensor mode_fold(const Eigen::MatrixXd& m, std::size_t mode, const Shape& dims) {
    if (mode >= dims.size()) throw DimensionError("mode out of range in mode_fold");
    const auto [outer, extent, inner] = split_at(dims, mode);
    if (static_cast<std::size_t>(m.rows()) != extent || static_cast<std::size_t>(m.cols()) != outer * inner)
        throw DimensionError("mode_fold: matrix shape does not match dims " + shape_string(dims));
    Tensor out(dims);
    double* dst = out.data().data();
    for (std::size_t o = 0; o < outer; ++o)
        RowMajorMapMut(dst + o * extent * inner, extent, inner) =
            m.middleCols(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner));
    return out;
}

Tensor mode_product(const Tensor& t, const Eigen::MatrixXd& m, std::size_t mode) {
    if (mode >= t.order()) throw DimensionError("mode out of range in mode_product");
    const auto [outer, extent, inner] = split_at(t.dims(), mode);
    if (static_cast<std::size_t>(m.cols()) != extent)
        throw DimensionError("mode_product: matrix has " + std::to_string(m.cols()) + " columns, axis has " +
                             std::to_string(extent));
    Shape dims = t.dims();
    dims[mode] = static_cast<std::size_t>(m.rows());
    Tensor out(dims);
    const std::size_t rows = dims[mode];
    for (std::size_t o = 0; o < outer; ++o) {
        RowMajorMapMut(out.data().data() + o * rows * inner, rows, inner).noalias() =
            m * RowMajorMap(t.data().data() + o * extent * inner, extent, inner);
    }
    return out;
}

GappyData inject_gaps(const Tensor& t, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw ArgumentError("gap fraction must lie in [0, 1), got " + std::to_string(fraction));
    if (!t.all_finite()) throw ArgumentError("inject_gaps expects a tensor without missing entries");

    const std::size_t total = t.size();
    const auto n_gaps = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));

    // Partial Fisher-Yates over the flat indices.
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    random::SplitMix rng(seed);
    for (std::size_t i = 0; i < n_gaps; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(order[i], order[j]);
    }

    GappyData out{t, GapMask(t.dims())};
    for (std::size_t i = 0; i < n_gaps; ++i) {
        out.mask.set(order[i], true);
        out.data[order[i]] = kMissing;
    }
    return out;
}

Downsampled downsample(const Tensor& t, std::span<const std::size_t> factors) {
    require_snapshot_tensor(t);
    const Shape spatial = t.spatial_dims();
    if (factors.size() != spatial.size())
        throw ArgumentError("downsample needs one factor per spatial axis (" + std::to_string(spatial.size()) +
                            "), got " + std::to_string(factors.size()));

    Downsampled out;
    out.source_dims = t.dims();
    Shape new_spatial(spatial.size());
    for (std::size_t a = 0; a < spatial.size(); ++a) {
        const std::size_t f = factors[a];
        if (f == 0 || f > spatial[a])
            throw ArgumentError("downsample factor " + std::to_string(f) + " invalid for axis of length " +
                                std::to_string(spatial[a]));
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < spatial[a]; i += f) pos.push_back(i);
        new_spatial[a] = pos.size();
        out.positions.push_back(std::move(pos));
    }

    Shape dims;
    if (t.order() == 2) {
        dims = {new_spatial[0], t.snapshots()};
    } else {
        dims.push_back(t.components());
        dims.insert(dims.end(), new_spatial.begin(), new_spatial.end());
        dims.push_back(t.snapshots());
    }
    out.data = Tensor(dims);

    const std::size_t n_axes = spatial.size();
    const std::size_t new_size = shape_product(new_spatial);
    const std::size_t k_count = t.snapshots();
    std::vector<std::size_t> idx(n_axes);
    for (std::size_t c = 0; c < t.components(); ++c) {
        for (std::size_t s = 0; s < new_size; ++s) {
            // Decompose s into per-axis coarse indices, map to fine spatial index.
            std::size_t rem = s;
            for (std::size_t a = n_axes; a-- > 0;) {
                idx[a] = rem % new_spatial[a];
                rem /= new_spatial[a];
            }
            std::size_t src = 0;
            for (std::size_t a = 0; a < n_axes; ++a) src = src * spatial[a] + out.positions[a][idx[a]];
            for (std::size_t k = 0; k < k_count; ++k)
                out.data[(c * new_size + s) * k_count + k] = t[t.snapshot_index(c, src, k)];
        }
    }
    return out;
}

}  // namespace modalrepair
