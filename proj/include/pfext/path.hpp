#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pfext/errors.hpp"
#include "pfext/numerics.hpp"

namespace pfext {

// Piecewise-linear path in the complex plane.  A closed path stores its first
// vertex again at the end.
struct PathPolyline {
    std::vector<cdouble> vertices;
    bool closed = false;

    cdouble start() const { return vertices.front(); }
    cdouble end() const { return vertices.back(); }
    std::size_t segment_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }

    void validate() const {
        if (vertices.size() < 2) throw Error("path needs at least two vertices");
        double scale = 0.0;
        for (const auto& v : vertices) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k + 1 < vertices.size(); ++k)
            if (std::abs(vertices[k + 1] - vertices[k]) <= 1e-14 * std::max(1.0, scale))
                throw Error("path has a degenerate segment");
        if (closed && std::abs(vertices.front() - vertices.back()) > 1e-12 * std::max(1.0, scale))
            throw Error("closed path does not return to its start");
    }
};

inline PathPolyline reverse_path(const PathPolyline& p) {
    PathPolyline r;
    r.vertices.assign(p.vertices.rbegin(), p.vertices.rend());
    r.closed = p.closed;
    return r;
}

inline PathPolyline concat_paths(const PathPolyline& a, const PathPolyline& b) {
    if (std::abs(a.end() - b.start()) > 1e-12 * std::max(1.0, std::abs(a.end())))
        throw Error("concatenated paths do not meet");
    PathPolyline r = a;
    r.vertices.insert(r.vertices.end(), b.vertices.begin() + 1, b.vertices.end());
    r.closed = std::abs(r.start() - r.end()) <= 1e-12 * std::max(1.0, std::abs(r.start()));
    return r;
}

inline double path_length(const PathPolyline& p) {
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) len += std::abs(p.vertices[k + 1] - p.vertices[k]);
    return len;
}

inline double dist_point_segment(cdouble z, cdouble a, cdouble b) {
    const cdouble ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    double s = ((z - a) * std::conj(ab)).real() / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(z - (a + s * ab));
}

inline double min_dist_to_point(const PathPolyline& p, cdouble z) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k)
        d = std::min(d, dist_point_segment(z, p.vertices[k], p.vertices[k + 1]));
    return d;
}

// Winding number of a closed polyline around z, from summed turn angles.
inline double winding_number(const PathPolyline& p, cdouble z) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) {
        const cdouble u = p.vertices[k] - z;
        const cdouble v = p.vertices[k + 1] - z;
        total += std::arg(v / u);
    }
    return total / kTwoPi;
}

// Closed regular m-gon around `center` with radius r, starting and ending at
// angle `entry_angle`; counterclockwise for positive orientation, clockwise
// otherwise.
inline PathPolyline regular_polygon_loop(cdouble center, double r, int sides, double entry_angle,
                                         bool counterclockwise = true) {
    PathPolyline p;
    p.closed = true;
    p.vertices.reserve(static_cast<std::size_t>(sides) + 1);
    for (int k = 0; k <= sides; ++k) {
        const double a = entry_angle + (counterclockwise ? 1.0 : -1.0) * kTwoPi * double(k) / double(sides);
        p.vertices.push_back(center + std::polar(r, a));
    }
    p.vertices.back() = p.vertices.front();  // close exactly
    return p;
}

}  // namespace pfext
