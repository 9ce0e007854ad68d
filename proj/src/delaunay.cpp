#include "modalrepair/delaunay.hpp"

#include "modalrepair/errors.hpp"

#include <algorithm>
#include <limits>

namespace modalrepair {

namespace {

using i128 = __int128;

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

int sign(i128 v) { return (v > 0) - (v < 0); }

struct Node {
    std::array<std::uint32_t, 3> v;
    std::array<std::uint32_t, 3> nb;  // nb[i] lies across the edge opposite v[i]
    bool alive;
};

struct BoundaryEdge {
    std::uint32_t a, b;   // counter-clockwise as seen from inside the cavity
    std::uint32_t outer;  // triangle on the far side, or kNone
};

}  // namespace

int orientation(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
    const i128 abx = b.x - a.x, aby = b.y - a.y;
    const i128 acx = c.x - a.x, acy = c.y - a.y;
    return sign(abx * acy - aby * acx);
}

int in_circle(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c, const LatticePoint& d) {
    const i128 adx = a.x - d.x, ady = a.y - d.y;
    const i128 bdx = b.x - d.x, bdy = b.y - d.y;
    const i128 cdx = c.x - d.x, cdy = c.y - d.y;
    const i128 alift = adx * adx + ady * ady;
    const i128 blift = bdx * bdx + bdy * bdy;
    const i128 clift = cdx * cdx + cdy * cdy;
    return sign(alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady));
}

DelaunayTriangulation::DelaunayTriangulation(std::span<const LatticePoint> input) {
    const std::size_t n = input.size();
    if (n < 3) {
        degenerate_ = true;
        return;
    }
    if (n >= kNone - 3) throw ArgumentError("too many points for triangulation");

    bool collinear = true;
    for (std::size_t i = 2; i < n && collinear; ++i) collinear = orientation(input[0], input[1], input[i]) == 0;
    if (collinear) {
        degenerate_ = true;
        return;
    }

    std::int64_t xmin = input[0].x, xmax = xmin, ymin = input[0].y, ymax = ymin;
    for (const auto& p : input) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    // The enclosing triangle must sit outside every circumcircle of the real
    // triangles; lattice circumradii are bounded by ~sqrt(2) * extent^3.
    // The 1e9 cap keeps every predicate within 128-bit range.
    const std::int64_t extent = std::max(xmax - xmin, ymax - ymin) + 1;
    constexpr std::int64_t kMaxReach = 1'000'000'000;
    const std::int64_t reach = extent >= 630 ? kMaxReach : 4 * extent * extent * extent + 16;
    const std::int64_t cx = (xmin + xmax) / 2, cy = (ymin + ymax) / 2;

    std::vector<LatticePoint> pts(input.begin(), input.end());
    const auto s0 = static_cast<std::uint32_t>(n);
    pts.push_back({cx - 2 * reach, cy - reach});
    pts.push_back({cx + 2 * reach, cy - reach});
    pts.push_back({cx, cy + 2 * reach});

    std::vector<Node> tris;
    tris.reserve(8 * n + 16);
    tris.push_back({{s0, s0 + 1, s0 + 2}, {kNone, kNone, kNone}, true});

    std::vector<std::uint32_t> cavity;
    std::vector<std::uint32_t> stamp;  // last insertion that visited a triangle
    std::vector<BoundaryEdge> boundary;
    std::uint32_t last = 0;

    auto locate = [&](const LatticePoint& p) -> std::uint32_t {
        std::uint32_t t = last;
        const std::size_t max_steps = 4 * tris.size() + 64;
        for (std::size_t step = 0; step < max_steps; ++step) {
            const Node& tri = tris[t];
            bool moved = false;
            for (int i = 0; i < 3; ++i) {
                const auto a = tri.v[(i + 1) % 3], b = tri.v[(i + 2) % 3];
                if (orientation(pts[a], pts[b], p) < 0 && tri.nb[i] != kNone) {
                    t = tri.nb[i];
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        for (std::uint32_t i = 0; i < tris.size(); ++i) {
            if (!tris[i].alive) continue;
            const auto& v = tris[i].v;
            if (orientation(pts[v[0]], pts[v[1]], p) >= 0 && orientation(pts[v[1]], pts[v[2]], p) >= 0 &&
                orientation(pts[v[2]], pts[v[0]], p) >= 0)
                return i;
        }
        throw NumericalError("triangulation point location failed");
    };

    for (std::uint32_t pi = 0; pi < s0; ++pi) {
        const LatticePoint& p = pts[pi];
        const std::uint32_t start = locate(p);

        stamp.resize(tris.size(), kNone);
        cavity.clear();
        cavity.push_back(start);
        stamp[start] = pi;
        for (std::size_t q = 0; q < cavity.size(); ++q) {
            const Node& tri = tris[cavity[q]];
            for (int i = 0; i < 3; ++i) {
                const auto nb = tri.nb[i];
                if (nb == kNone || stamp[nb] == pi) continue;
                const auto& v = tris[nb].v;
                if (in_circle(pts[v[0]], pts[v[1]], pts[v[2]], p) > 0) {
                    stamp[nb] = pi;
                    cavity.push_back(nb);
                }
            }
        }

        // Grow the cavity until p sees every boundary edge strictly.
        for (bool grown = true; grown;) {
            grown = false;
            boundary.clear();
            for (const auto t : cavity) {
                const Node& tri = tris[t];
                for (int i = 0; i < 3; ++i) {
                    const auto nb = tri.nb[i];
                    if (nb != kNone && stamp[nb] == pi) continue;
                    const BoundaryEdge e{tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], nb};
                    if (orientation(pts[e.a], pts[e.b], p) <= 0 && nb != kNone) {
                        stamp[nb] = pi;
                        cavity.push_back(nb);
                        grown = true;
                        break;
                    }
                    boundary.push_back(e);
                }
                if (grown) break;
            }
        }

        const auto first_new = static_cast<std::uint32_t>(tris.size());
        for (const auto& e : boundary) tris.push_back({{e.a, e.b, pi}, {kNone, kNone, e.outer}, true});
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            const auto id = static_cast<std::uint32_t>(first_new + i);
            const auto& e = boundary[i];
            if (e.outer != kNone) {
                Node& o = tris[e.outer];
                for (int k = 0; k < 3; ++k)
                    if (o.nb[k] != kNone && stamp.size() > o.nb[k] && stamp[o.nb[k]] == pi &&
                        ((o.v[(k + 1) % 3] == e.b && o.v[(k + 2) % 3] == e.a))) {
                        o.nb[k] = id;
                        break;
                    }
            }
            // Edge (b, p) is shared with the new triangle whose boundary edge starts at b,
            // edge (p, a) with the one whose boundary edge ends at a.
            for (std::size_t j = 0; j < boundary.size(); ++j) {
                if (boundary[j].a == e.b) tris[id].nb[0] = static_cast<std::uint32_t>(first_new + j);
                if (boundary[j].b == e.a) tris[id].nb[1] = static_cast<std::uint32_t>(first_new + j);
            }
        }
        for (const auto t : cavity) tris[t].alive = false;
        last = first_new;
    }

    for (const auto& tri : tris) {
        if (!tri.alive) continue;
        if (tri.v[0] >= s0 || tri.v[1] >= s0 || tri.v[2] >= s0) continue;
        triangles_.push_back(tri.v);
    }
}

}  // namespace modalrepair
