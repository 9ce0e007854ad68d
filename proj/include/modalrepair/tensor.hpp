#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace modalrepair {

using Shape = std::vector<std::size_t>;

/// J x K snapshot matrix; column k is the flattened snapshot at time k.
using SnapshotMatrix = Eigen::MatrixXd;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::size_t shape_product(std::span<const std::size_t> dims);

/// Dense real tensor stored row-major (last index varies fastest).
///
/// Snapshot tensors use the layout [components, spatial..., time]. An order-2
/// tensor [J, K] is a snapshot matrix with a single component and a 1-D
/// spatial axis of length J. Core tensors of Tucker decompositions reuse the
/// same container with arbitrary order.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape dims, double fill = 0.0);
    Tensor(Shape dims, std::vector<double> data);

    std::size_t order() const { return dims_.size(); }
    const Shape& dims() const { return dims_; }
    std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
    std::size_t size() const { return data_.size(); }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    double at(std::span<const std::size_t> index) const;
    double& at(std::span<const std::size_t> index);
    std::size_t flat_index(std::span<const std::size_t> index) const;

    // Snapshot-tensor views of the shape.
    std::size_t components() const;
    std::size_t snapshots() const { return dims_.back(); }
    Shape spatial_dims() const;
    std::size_t spatial_size() const;
    /// Flat index of (component, row-major spatial index, snapshot).
    std::size_t snapshot_index(std::size_t component, std::size_t spatial, std::size_t k) const {
        return (component * spatial_size_ + spatial) * dims_.back() + k;
    }

    bool all_finite() const;

    friend bool operator==(const Tensor& a, const Tensor& b);

private:
    void cache_layout();

    Shape dims_;
    std::vector<double> data_;
    std::size_t spatial_size_ = 0;
};

/// Throws DimensionError unless `t` is a snapshot tensor of order 2..5.
void require_snapshot_tensor(const Tensor& t);

using SnapshotTensor = Tensor;

/// Boolean tensor over the same shape as its data; true marks a missing entry.
class GapMask {
public:
    GapMask() = default;
    explicit GapMask(Shape dims, bool value = false);
    GapMask(Shape dims, std::vector<std::uint8_t> mask);

    /// Mask of the NaN entries of `t`.
    static GapMask from_nan(const Tensor& t);

    const Shape& dims() const { return dims_; }
    std::size_t size() const { return mask_.size(); }
    bool operator[](std::size_t flat) const { return mask_[flat] != 0; }
    void set(std::size_t flat, bool missing) { mask_[flat] = missing ? 1 : 0; }

    std::size_t count() const;
    double fraction() const;
    std::vector<std::size_t> gap_indices() const;
    const std::vector<std::uint8_t>& raw() const { return mask_; }

    friend bool operator==(const GapMask& a, const GapMask& b) = default;

private:
    Shape dims_;
    std::vector<std::uint8_t> mask_;
};

void require_same_shape(const Shape& a, const Shape& b, const char* what);

/// Folds every non-time index into one row index (component slowest, spatial
/// axes in declaration order). The result is J x K with column k = snapshot k.
SnapshotMatrix unfold(const Tensor& t);

/// Inverse of unfold. `dims` must have product of leading dims == rows and
/// last dim == cols.
Tensor fold(const SnapshotMatrix& m, const Shape& dims);

/// Mode-n matricization (0-based mode). Row i holds the entries with index i
/// along `mode`; columns enumerate the remaining indices in ascending
/// row-major order (last remaining index fastest).
Eigen::MatrixXd mode_unfold(const Tensor& t, std::size_t mode);

/// Inverse of mode_unfold for a tensor of shape `dims`.
Tensor mode_fold(const Eigen::MatrixXd& m, std::size_t mode, const Shape& dims);

/// n-mode product: contracts axis `mode` of `t` with the columns of `m`.
/// Result has dims[mode] replaced by m.rows().
Tensor mode_product(const Tensor& t, const Eigen::MatrixXd& m, std::size_t mode);

struct GappyData {
    Tensor data;  ///< input with NaN at every gap
    GapMask mask;
};

/// Removes exactly round(fraction * size) entries chosen uniformly without
/// replacement. Deterministic for a given seed on every platform.
GappyData inject_gaps(const Tensor& t, double fraction, std::uint64_t seed);

struct Downsampled {
    Tensor data;
    Shape source_dims;
    /// For every spatial axis, the source index of each kept sample.
    std::vector<std::vector<std::size_t>> positions;
};

/// Keeps indices 0, f, 2f, ... along each spatial axis. Component and time
/// axes are untouched.
Downsampled downsample(const Tensor& t, std::span<const std::size_t> factors);

}  // namespace modalrepair
