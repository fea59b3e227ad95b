// geometry.hpp - planar polygon support for geofences: containment tests,
// shoelace centroids, bounding boxes and WKT serialization.
//
// Equirectangular (lon/lat as plain x/y) geometry throughout; boundary
// points count as inside.
#ifndef TVL_GEOMETRY_HPP
#define TVL_GEOMETRY_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tvl/common.hpp"

namespace tvl {

struct LonLat {
    double lon = 0;
    double lat = 0;

    bool operator==(const LonLat&) const = default;
};

// Closed vertex ring: first == last.
using Ring = std::vector<LonLat>;

struct BoundingBox {
    double min_lon = 0, min_lat = 0, max_lon = 0, max_lat = 0;

    bool contains(LonLat p) const {
        return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
    }
};

struct Polygon {
    Ring exterior;
    std::vector<Ring> holes;
};

namespace geom {

inline constexpr double kOnBoundaryEps = 1e-12;

inline double signed_ring_area(const Ring& r) {
    double a = 0;
    for (size_t i = 0; i + 1 < r.size(); ++i)
        a += r[i].lon * r[i + 1].lat - r[i + 1].lon * r[i].lat;
    return a / 2.0;
}

inline bool point_on_segment(LonLat p, LonLat a, LonLat b) {
    double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
    if (std::fabs(cross) > kOnBoundaryEps) return false;
    double minx = std::min(a.lon, b.lon), maxx = std::max(a.lon, b.lon);
    double miny = std::min(a.lat, b.lat), maxy = std::max(a.lat, b.lat);
    return p.lon >= minx - kOnBoundaryEps && p.lon <= maxx + kOnBoundaryEps &&
           p.lat >= miny - kOnBoundaryEps && p.lat <= maxy + kOnBoundaryEps;
}

inline bool point_on_ring_boundary(LonLat p, const Ring& r) {
    for (size_t i = 0; i + 1 < r.size(); ++i)
        if (point_on_segment(p, r[i], r[i + 1])) return true;
    return false;
}

// Even-odd ray casting, boundary excluded (callers handle boundary first).
inline bool point_in_ring_interior(LonLat p, const Ring& r) {
    bool inside = false;
    for (size_t i = 0, j = r.size() - 2; i + 1 < r.size(); j = i++) {
        const LonLat& a = r[i];
        const LonLat& b = r[j];
        if ((a.lat > p.lat) != (b.lat > p.lat)) {
            double x_cross = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
            if (p.lon < x_cross) inside = !inside;
        }
    }
    return inside;
}

inline BoundingBox ring_bbox(const Ring& r) {
    BoundingBox b{r[0].lon, r[0].lat, r[0].lon, r[0].lat};
    for (const auto& v : r) {
        b.min_lon = std::min(b.min_lon, v.lon);
        b.max_lon = std::max(b.max_lon, v.lon);
        b.min_lat = std::min(b.min_lat, v.lat);
        b.max_lat = std::max(b.max_lat, v.lat);
    }
    return b;
}

inline bool segments_intersect_interior(LonLat p1, LonLat p2, LonLat q1, LonLat q2) {
    auto orient = [](LonLat a, LonLat b, LonLat c) {
        double v = (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
        if (v > kOnBoundaryEps) return 1;
        if (v < -kOnBoundaryEps) return -1;
        return 0;
    };
    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

inline bool ring_self_intersects(const Ring& r) {
    size_t n = r.size() - 1;  // edges
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i || j == (i + 1) % n || (j + 1) % n == i) continue;  // adjacent edges share a vertex
            if (segments_intersect_interior(r[i], r[i + 1], r[j], r[j + 1])) return true;
        }
    }
    return false;
}

}  // namespace geom

// True iff p lies inside the exterior ring and outside every hole's
// interior; points on any ring boundary count as inside.
inline bool point_in_polygon(LonLat p, const Polygon& poly) {
    if (geom::point_on_ring_boundary(p, poly.exterior)) return true;
    if (!geom::point_in_ring_interior(p, poly.exterior)) return false;
    for (const auto& hole : poly.holes) {
        if (geom::point_on_ring_boundary(p, hole)) return true;
        if (geom::point_in_ring_interior(p, hole)) return false;
    }
    return true;
}

// Area-weighted (shoelace) centroid of the exterior ring.
inline LonLat polygon_centroid(const Polygon& poly) {
    const Ring& r = poly.exterior;
    double a = 0, cx = 0, cy = 0;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
        double w = r[i].lon * r[i + 1].lat - r[i + 1].lon * r[i].lat;
        a += w;
        cx += (r[i].lon + r[i + 1].lon) * w;
        cy += (r[i].lat + r[i + 1].lat) * w;
    }
    a /= 2.0;
    return LonLat{cx / (6.0 * a), cy / (6.0 * a)};
}

inline BoundingBox polygon_bbox(const Polygon& poly) { return geom::ring_bbox(poly.exterior); }

// WKT with fixed 6-decimal coordinates (GPS-grade, diff-stable).
inline std::string polygon_wkt(const Polygon& poly) {
    auto ring_text = [](const Ring& r) {
        std::string out = "(";
        char buf[64];
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) out += ", ";
            std::snprintf(buf, sizeof(buf), "%.6f %.6f", r[i].lon, r[i].lat);
            out += buf;
        }
        out += ")";
        return out;
    };
    std::string out = "POLYGON(" + ring_text(poly.exterior);
    for (const auto& h : poly.holes) out += ", " + ring_text(h);
    out += ")";
    return out;
}

}  // namespace tvl

#endif  // TVL_GEOMETRY_HPP
