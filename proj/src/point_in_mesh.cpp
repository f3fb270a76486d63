#include "bim2map/geometry.hpp"

#include "bim2map/errors.hpp"

#include <cmath>
#include <cstdint>

namespace bim2map::geom {

namespace {

// Deterministic direction generator (independent of stdlib RNG details).
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Vec3 random_direction(std::uint64_t& state) {
    while (true) {
        auto unit = [&]() {
            return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        };
        Vec3 d(unit(), unit(), unit());
        double n = d.norm();
        if (n > 0.1 && n < 1.0) return d / n;
    }
}

double dist2_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // closest point on triangle (Ericson, Real-Time Collision Detection)
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return ap.squaredNorm();
    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return bp.squaredNorm();
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        double v = d1 / (d1 - d3);
        return (ap - v * ab).squaredNorm();
    }
    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return cp.squaredNorm();
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        double w = d2 / (d2 - d6);
        return (ap - w * ac).squaredNorm();
    }
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (bp - w * (c - b)).squaredNorm();
    }
    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return (ap - ab * v - ac * w).squaredNorm();
}

enum class Hit { Miss, Cross, Grazing };

Hit ray_triangle(const Vec3& orig, const Vec3& dir, const Vec3& a, const Vec3& b, const Vec3& c) {
    constexpr double bary_tol = 1e-10;
    Vec3 e1 = b - a, e2 = c - a;
    Vec3 pvec = dir.cross(e2);
    double det = e1.dot(pvec);
    if (std::abs(det) < 1e-14) return Hit::Grazing; // near-parallel: retry elsewhere
    double inv = 1.0 / det;
    Vec3 tvec = orig - a;
    double u = tvec.dot(pvec) * inv;
    Vec3 qvec = tvec.cross(e1);
    double v = dir.dot(qvec) * inv;
    double t = e2.dot(qvec) * inv;
    bool inside = u > bary_tol && v > bary_tol && u + v < 1.0 - bary_tol;
    bool outside = u < -bary_tol || v < -bary_tol || u + v > 1.0 + bary_tol;
    if (t < 1e-12) {
        if (t > -1e-12 && !outside) return Hit::Grazing; // grazes at the origin
        return Hit::Miss;
    }
    if (inside) return Hit::Cross;
    if (outside) return Hit::Miss;
    return Hit::Grazing; // passes within tolerance of an edge or vertex
}

} // namespace

bool point_in_mesh(const Mesh& mesh, const Vec3& point) {
    if (!is_watertight(mesh)) throw GeometryError("mesh is not watertight");
    Vec3 p = mesh.transform.inverse() * point;

    for (const auto& f : mesh.faces)
        if (dist2_point_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                 mesh.vertices[f[2]]) < 1e-24)
            return false; // on the surface: not strictly inside

    std::uint64_t state = 0xC0FFEE123456789AULL;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec3 dir = random_direction(state);
        int crossings = 0;
        bool bad = false;
        for (const auto& f : mesh.faces) {
            Hit h = ray_triangle(p, dir, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                 mesh.vertices[f[2]]);
            if (h == Hit::Cross) ++crossings;
            else if (h == Hit::Grazing) {
                bad = true;
                break;
            }
        }
        if (!bad) return crossings % 2 == 1;
    }
    throw GeometryError("ray parity test failed to find a clean direction");
}

} // namespace bim2map::geom
