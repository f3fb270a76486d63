#include "bim2map/geometry.hpp"

#include <boost/geometry/algorithms/area.hpp>
#include <boost/geometry/algorithms/correct.hpp>
#include <boost/geometry/algorithms/intersection.hpp>
#include <boost/geometry/algorithms/union.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <cmath>

namespace bim2map::geom {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, false, true>; // CCW outer, closed rings
using BMulti = bg::model::multi_polygon<BPoly>;

namespace {

double snap(double v) { return std::round(v * 1e7) / 1e7; } // 1e-7 m grid

void append_ring(BPoly::ring_type& out, const Ring& ring) {
    for (const auto& p : ring) out.emplace_back(snap(p.x()), snap(p.y()));
    if (!out.empty()) out.push_back(out.front());
}

Ring from_bg_ring(const BPoly::ring_type& ring) {
    Ring out;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) // last point repeats the first
        out.emplace_back(bg::get<0>(ring[i]), bg::get<1>(ring[i]));
    return out;
}

} // namespace

std::vector<PolygonWithHoles> union_polygons(const std::vector<PolygonWithHoles>& polys) {
    BMulti acc;
    for (const auto& poly : polys) {
        BPoly b;
        append_ring(b.outer(), poly.outer);
        if (std::abs(bg::area(b)) < 1e-14) continue; // snapped away
        for (const auto& hole : poly.holes) {
            BPoly::ring_type h;
            append_ring(h, hole);
            b.inners().push_back(std::move(h));
        }
        bg::correct(b);
        BMulti merged;
        bg::union_(acc, b, merged);
        acc = std::move(merged);
    }
    std::vector<PolygonWithHoles> out;
    out.reserve(acc.size());
    for (const auto& b : acc) {
        PolygonWithHoles p;
        p.outer = from_bg_ring(b.outer());
        if (p.outer.size() < 3) continue;
        for (const auto& h : b.inners()) {
            Ring hole = from_bg_ring(h);
            if (hole.size() >= 3) p.holes.push_back(std::move(hole));
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PolygonWithHoles> clip_polygons_to_box(const std::vector<PolygonWithHoles>& polys,
                                                   const std::array<double, 4>& box) {
    BPoly window;
    window.outer() = {{box[0], box[1]}, {box[2], box[1]}, {box[2], box[3]},
                      {box[0], box[3]}, {box[0], box[1]}};
    bg::correct(window);
    BMulti clipped;
    for (const auto& poly : polys) {
        BPoly b;
        append_ring(b.outer(), poly.outer);
        for (const auto& hole : poly.holes) {
            BPoly::ring_type h;
            append_ring(h, hole);
            b.inners().push_back(std::move(h));
        }
        bg::correct(b);
        BMulti part;
        bg::intersection(b, window, part);
        BMulti merged;
        bg::union_(clipped, part, merged);
        clipped = std::move(merged);
    }
    std::vector<PolygonWithHoles> out;
    for (const auto& b : clipped) {
        PolygonWithHoles p;
        p.outer = from_bg_ring(b.outer());
        if (p.outer.size() < 3) continue;
        for (const auto& h : b.inners()) {
            Ring hole = from_bg_ring(h);
            if (hole.size() >= 3) p.holes.push_back(std::move(hole));
        }
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

bool on_ring_boundary(const Ring& ring, const Vec2& p, double tol) {
    std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % n];
        Vec2 ab = b - a;
        double len2 = ab.squaredNorm();
        double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        if ((a + t * ab - p).squaredNorm() <= tol * tol) return true;
    }
    return false;
}

bool crossings_odd(const Ring& ring, const Vec2& p) {
    bool odd = false;
    std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % n];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (x > p.x()) odd = !odd;
        }
    }
    return odd;
}

} // namespace

bool point_in_polygons(const std::vector<PolygonWithHoles>& polys, const Vec2& p) {
    constexpr double tol = 1e-9;
    for (const auto& poly : polys) {
        if (on_ring_boundary(poly.outer, p, tol)) return true;
        if (!crossings_odd(poly.outer, p)) continue;
        bool in_hole = false;
        for (const auto& h : poly.holes) {
            if (on_ring_boundary(h, p, tol)) return true; // hole rim belongs to the polygon
            if (crossings_odd(h, p)) {
                in_hole = true;
                break;
            }
        }
        if (!in_hole) return true;
    }
    return false;
}

} // namespace bim2map::geom
