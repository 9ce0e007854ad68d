#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace modalrepair {

struct LatticePoint {
    std::int64_t x;
    std::int64_t y;
};

/// Incremental Bowyer-Watson Delaunay triangulation of distinct integer points.
///
/// Predicates are evaluated exactly in 128-bit integers, so cocircular lattice
/// configurations are resolved consistently. Points are inserted in the given
/// order; each is located by a visibility walk from the previous insertion.
class DelaunayTriangulation {
public:
    using Triangle = std::array<std::uint32_t, 3>;  ///< counter-clockwise vertex indices

    explicit DelaunayTriangulation(std::span<const LatticePoint> points);

    /// Triangles covering the convex hull of the input points.
    const std::vector<Triangle>& triangles() const { return triangles_; }

    /// True when the input has fewer than three points or all are collinear.
    bool degenerate() const { return degenerate_; }

private:
    std::vector<Triangle> triangles_;
    bool degenerate_ = false;
};

/// Sign of the exact orientation determinant: > 0 when c lies left of a->b.
int orientation(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c);

/// > 0 when d is strictly inside the circumcircle of counter-clockwise (a, b, c).
int in_circle(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c, const LatticePoint& d);

}  // namespace modalrepair
