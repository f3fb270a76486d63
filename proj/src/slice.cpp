#include "bim2map/geometry.hpp"

#include "bim2map/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace bim2map::geom {

namespace {

// Clips a convex 3D polygon against a z half-space; boundary points are kept,
// so faces coplanar with a slab plane survive whole.
std::vector<Vec3> clip_z(const std::vector<Vec3>& poly, double z_plane, bool keep_above) {
    std::vector<Vec3> out;
    std::size_t n = poly.size();
    auto inside = [&](const Vec3& v) {
        return keep_above ? v.z() >= z_plane : v.z() <= z_plane;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& cur = poly[i];
        const Vec3& nxt = poly[(i + 1) % n];
        bool ci = inside(cur), ni = inside(nxt);
        if (ci) out.push_back(cur);
        if (ci != ni) {
            double t = (z_plane - cur.z()) / (nxt.z() - cur.z());
            out.push_back(cur + t * (nxt - cur));
        }
    }
    return out;
}

bool ring_contains(const Ring& ring, const Vec2& p) {
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

// Section of the mesh interior with the transversal plane z = c (no vertex may
// lie exactly on the plane). Returns solid regions as polygons with holes.
std::vector<PolygonWithHoles> plane_section(const std::vector<Vec3>& w,
                                            const std::vector<std::array<int, 3>>& faces,
                                            double c) {
    using EdgeKey = std::pair<int, int>;
    std::map<EdgeKey, Vec2> cut_point;
    std::map<EdgeKey, std::vector<EdgeKey>> adj;

    auto edge_point = [&](int a, int b) -> EdgeKey {
        EdgeKey key{std::min(a, b), std::max(a, b)};
        if (!cut_point.count(key)) {
            const Vec3& lo = w[key.first];
            const Vec3& hi = w[key.second];
            double t = (c - lo.z()) / (hi.z() - lo.z()); // canonical: low index first
            Vec3 p = lo + t * (hi - lo);
            cut_point.emplace(key, Vec2(p.x(), p.y()));
        }
        return key;
    };

    for (const auto& f : faces) {
        EdgeKey crossing[3];
        int nc = 0;
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if ((w[a].z() > c) != (w[b].z() > c)) crossing[nc++] = edge_point(a, b);
        }
        if (nc == 2) {
            adj[crossing[0]].push_back(crossing[1]);
            adj[crossing[1]].push_back(crossing[0]);
        }
    }

    // each crossing edge belongs to exactly two faces: walk the 2-regular graph
    std::vector<Ring> rings;
    std::set<EdgeKey> visited;
    for (const auto& [start, nbrs] : adj) {
        if (visited.count(start) || nbrs.size() != 2) continue;
        Ring ring;
        EdgeKey prev = start, cur = start;
        while (true) {
            visited.insert(cur);
            ring.push_back(cut_point[cur]);
            const auto& nn = adj[cur];
            if (nn.size() != 2) { // defensive: malformed section
                ring.clear();
                break;
            }
            EdgeKey next = ring.size() == 1 ? nn[0] : (nn[0] == prev ? nn[1] : nn[0]);
            prev = cur;
            cur = next;
            if (cur == start) break;
            if (visited.count(cur)) break; // defensive
        }
        if (ring.size() >= 3) rings.push_back(std::move(ring));
    }

    // even-odd nesting: even depth = solid boundary (CCW), odd = hole (CW)
    std::size_t m = rings.size();
    std::vector<int> depth(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && ring_contains(rings[j], rings[i][0])) ++depth[i];

    for (std::size_t i = 0; i < m; ++i) {
        bool ccw = ring_area(rings[i]) > 0;
        bool want_ccw = depth[i] % 2 == 0;
        if (ccw != want_ccw) std::reverse(rings[i].begin(), rings[i].end());
    }

    std::vector<PolygonWithHoles> out;
    std::vector<std::size_t> poly_of(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i)
        if (depth[i] % 2 == 0) {
            poly_of[i] = out.size();
            out.push_back({rings[i], {}});
        }
    for (std::size_t i = 0; i < m; ++i) {
        if (depth[i] % 2 == 0) continue;
        // parent: the containing ring one level shallower
        for (std::size_t j = 0; j < m; ++j)
            if (depth[j] == depth[i] - 1 && ring_contains(rings[j], rings[i][0])) {
                out[poly_of[j]].holes.push_back(rings[i]);
                break;
            }
    }
    return out;
}

std::vector<double> choose_cuts(const std::vector<Vec3>& w, double z_low, double z_high) {
    std::set<double> zs; // all vertex z values, for exact-collision avoidance
    std::vector<double> events{z_low, z_high};
    for (const auto& v : w) {
        zs.insert(v.z());
        if (v.z() >= z_low && v.z() <= z_high) events.push_back(v.z());
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    std::vector<double> cuts;
    if (z_high - z_low < 1e-12) {
        // degenerate slab: take the interior limit from both sides
        cuts = {z_low - 1e-12, z_high + 1e-12};
    } else {
        double best_lo = events[0], best_hi = events[0];
        for (std::size_t i = 0; i + 1 < events.size(); ++i)
            if (events[i + 1] - events[i] > best_hi - best_lo) {
                best_lo = events[i];
                best_hi = events[i + 1];
            }
        cuts = {(best_lo + best_hi) / 2.0};
    }
    for (double& c : cuts)
        while (zs.count(c)) c = std::nextafter(c, c + 1.0);
    return cuts;
}

} // namespace

CrossSection slab_cross_section(const Mesh& mesh, const Slab& slab) {
    if (slab.z_low > slab.z_high) throw GeometryError("slab z_low exceeds z_high");
    CrossSection cs;
    if (mesh.empty()) return cs;
    if (!is_watertight(mesh)) throw GeometryError("mesh is not watertight");

    std::vector<Vec3> w;
    w.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices) w.push_back(mesh.transform * v);

    double zmin = w[0].z(), zmax = w[0].z();
    for (const auto& v : w) {
        zmin = std::min(zmin, v.z());
        zmax = std::max(zmax, v.z());
    }
    if (zmax < slab.z_low || zmin > slab.z_high) return cs;

    std::vector<PolygonWithHoles> pieces;

    // boundary faces clipped to the slab, projected to XY
    for (const auto& f : mesh.faces) {
        std::vector<Vec3> poly{w[f[0]], w[f[1]], w[f[2]]};
        poly = clip_z(poly, slab.z_low, true);
        if (poly.size() >= 3) poly = clip_z(poly, slab.z_high, false);
        if (poly.size() < 3) continue;
        Ring ring;
        ring.reserve(poly.size());
        for (const auto& p : poly) ring.emplace_back(p.x(), p.y());
        double a = ring_area(ring);
        if (std::abs(a) < 1e-14) continue;
        if (a < 0) std::reverse(ring.begin(), ring.end());
        pieces.push_back({std::move(ring), {}});
    }

    // interior cross-sections on event-free planes
    for (double c : choose_cuts(w, slab.z_low, slab.z_high)) {
        auto section = plane_section(w, mesh.faces, c);
        pieces.insert(pieces.end(), section.begin(), section.end());
    }

    cs.polygons = union_polygons(pieces);
    if (slab.xy_bounds) cs.polygons = clip_polygons_to_box(cs.polygons, *slab.xy_bounds);
    return cs;
}

} // namespace bim2map::geom
