#include "bim2map/geometry.hpp"

#include "bim2map/errors.hpp"
#include "bim2map/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bim2map::geom {

namespace {

Vec3 normalized_or_throw(const Vec3& v, const char* what) {
    double n = v.norm();
    if (n < 1e-9) throw GeometryError(std::string(what) + " has near-zero length");
    return v / n;
}

// Ear clipping of a simple CCW polygon given as indices into pts.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& pts) {
    std::size_t n = pts.size();
    std::vector<std::array<int, 3>> tris;
    if (n < 3) return tris;
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);

    auto cross_at = [&](std::size_t k) {
        const Vec2& a = pts[idx[(k + idx.size() - 1) % idx.size()]];
        const Vec2& b = pts[idx[k]];
        const Vec2& c = pts[idx[(k + 1) % idx.size()]];
        return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    };
    auto in_triangle = [](const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
        auto side = [](const Vec2& u, const Vec2& v, const Vec2& q) {
            return (v.x() - u.x()) * (q.y() - u.y()) - (v.y() - u.y()) * (q.x() - u.x());
        };
        double tol = -1e-12;
        return side(a, b, p) >= tol && side(b, c, p) >= tol && side(c, a, p) >= tol;
    };

    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (cross_at(k) <= 1e-14) continue; // reflex or collinear corner
            int ia = idx[(k + idx.size() - 1) % idx.size()];
            int ib = idx[k];
            int ic = idx[(k + 1) % idx.size()];
            bool ear = true;
            for (std::size_t j = 0; j < idx.size() && ear; ++j) {
                int v = idx[j];
                if (v == ia || v == ib || v == ic) continue;
                if (in_triangle(pts[v], pts[ia], pts[ib], pts[ic])) ear = false;
            }
            if (!ear) continue;
            tris.push_back({ia, ib, ic});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
            clipped = true;
            break;
        }
        if (!clipped) {
            // degenerate remainder (collinear chain): clip at the widest corner
            std::size_t best = 0;
            double best_cross = -1e300;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                double c = cross_at(k);
                if (c > best_cross) {
                    best_cross = c;
                    best = k;
                }
            }
            int ia = idx[(best + idx.size() - 1) % idx.size()];
            int ib = idx[best];
            int ic = idx[(best + 1) % idx.size()];
            tris.push_back({ia, ib, ic});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(best));
        }
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

std::vector<Vec2> clean_ring(std::vector<Vec2> ring) {
    if (ring.size() > 1 && (ring.front() - ring.back()).norm() < 1e-12) ring.pop_back();
    std::vector<Vec2> out;
    for (const auto& p : ring)
        if (out.empty() || (p - out.back()).norm() >= 1e-12) out.push_back(p);
    if (out.size() > 1 && (out.front() - out.back()).norm() < 1e-12) out.pop_back();
    return out;
}

Mesh tessellate_extrusion(const ExtrudedSolid& solid, const Transform& placement) {
    std::vector<Vec2> profile = clean_ring(solid.profile);
    double area = ring_area(profile);
    if (std::abs(area) < 1e-12) throw GeometryError("degenerate extrusion profile");
    if (area < 0) std::reverse(profile.begin(), profile.end()); // make CCW

    Vec3 dir = normalized_or_throw(solid.direction, "extrusion direction");
    if (!(solid.depth > 0)) throw GeometryError("extrusion depth must be positive");

    std::size_t n = profile.size();
    Mesh mesh;
    mesh.vertices.reserve(2 * n);
    Vec3 offset = dir * solid.depth;
    for (const auto& p : profile) mesh.vertices.push_back(placement * Vec3(p.x(), p.y(), 0.0));
    for (const auto& p : profile)
        mesh.vertices.push_back(placement * (Vec3(p.x(), p.y(), 0.0) + offset));

    auto caps = ear_clip(profile);
    int nn = static_cast<int>(n);
    for (const auto& t : caps) mesh.faces.push_back({t[0], t[2], t[1]}); // bottom, outward -z
    for (const auto& t : caps) mesh.faces.push_back({t[0] + nn, t[1] + nn, t[2] + nn}); // top
    for (int i = 0; i < nn; ++i) {
        int j = (i + 1) % nn;
        mesh.faces.push_back({i, j, j + nn});
        mesh.faces.push_back({i, j + nn, i + nn});
    }
    return mesh;
}

Mesh tessellate_faceted(const FacetedMesh& fm, const Transform& placement) {
    Mesh mesh;
    mesh.vertices.reserve(fm.vertices.size());
    for (const auto& v : fm.vertices) mesh.vertices.push_back(placement * v);

    for (const auto& face : fm.faces) {
        for (int ix : face)
            if (ix < 0 || ix >= static_cast<int>(mesh.vertices.size()))
                throw GeometryError("face index out of range");
        if (face.size() < 3) throw GeometryError("face with fewer than 3 vertices");
        if (face.size() == 3) {
            mesh.faces.push_back({face[0], face[1], face[2]});
            continue;
        }
        // Newell normal, then a 2D basis in the face plane
        Vec3 n = Vec3::Zero();
        Vec3 c = Vec3::Zero();
        for (int ix : face) c += mesh.vertices[ix];
        c /= static_cast<double>(face.size());
        for (std::size_t i = 0; i < face.size(); ++i) {
            const Vec3& a = mesh.vertices[face[i]];
            const Vec3& b = mesh.vertices[face[(i + 1) % face.size()]];
            n += (a - c).cross(b - c);
        }
        if (n.norm() < 1e-14) throw GeometryError("degenerate planar face");
        n.normalize();
        Vec3 e = std::abs(n.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
        Vec3 u = n.cross(e).normalized();
        Vec3 v = n.cross(u);
        std::vector<Vec2> flat;
        flat.reserve(face.size());
        for (int ix : face) {
            const Vec3& p = mesh.vertices[ix];
            flat.emplace_back(p.dot(u), p.dot(v));
        }
        // (u, v, n) is right-handed, so the ring is CCW in (u, v) and the
        // input winding survives triangulation
        auto tris = ear_clip(flat);
        for (const auto& t : tris)
            mesh.faces.push_back({face[t[0]], face[t[1]], face[t[2]]});
    }
    return mesh;
}

} // namespace

Transform make_axis_placement(const Placement& p) {
    Vec3 z = p.axis ? normalized_or_throw(*p.axis, "placement axis") : Vec3(0, 0, 1);
    Vec3 x_hint;
    if (p.ref_direction) {
        x_hint = normalized_or_throw(*p.ref_direction, "placement ref_direction");
    } else {
        x_hint = std::abs(z.dot(Vec3(1, 0, 0))) > 1.0 - 1e-9 ? Vec3(0, 1, 0) : Vec3(1, 0, 0);
    }
    Vec3 x = x_hint - z * z.dot(x_hint);
    if (x.norm() < 1e-9) throw GeometryError("placement axis and ref_direction are parallel");
    x.normalize();
    Vec3 y = z.cross(x);
    Eigen::Matrix3d rot;
    rot.col(0) = x;
    rot.col(1) = y;
    rot.col(2) = z;
    Transform t = Transform::Identity();
    t.linear() = rot;
    t.translation() = p.origin;
    return t;
}

Transform compose_transform(const PlacementChain& chain) {
    Transform t = Transform::Identity();
    for (const auto& p : chain) t = t * make_axis_placement(p); // root first
    return t;
}

std::vector<std::pair<int, int>> mesh_edges(const Mesh& mesh) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(mesh.faces.size() * 3);
    for (const auto& f : mesh.faces)
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

bool is_watertight(const Mesh& mesh) {
    if (mesh.faces.empty()) return false;
    std::map<std::pair<int, int>, std::pair<int, int>> dir_count; // (min,max) -> (fwd, rev)
    for (const auto& f : mesh.faces) {
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return false;
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if (a < 0 || b < 0 || a >= static_cast<int>(mesh.vertices.size()) ||
                b >= static_cast<int>(mesh.vertices.size()))
                return false;
            auto& c = dir_count[{std::min(a, b), std::max(a, b)}];
            (a < b ? c.first : c.second) += 1;
        }
    }
    for (const auto& [e, c] : dir_count)
        if (c.first != 1 || c.second != 1) return false;
    return true;
}

double mesh_volume(const Mesh& mesh) {
    double six_v = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        six_v += a.dot(b.cross(c));
    }
    return six_v / 6.0;
}

Mesh merge_meshes(const std::vector<Mesh>& parts) {
    Mesh out;
    for (const auto& part : parts) {
        if (out.vertices.empty() && out.faces.empty()) out.transform = part.transform;
        if (!part.transform.isApprox(out.transform, 1e-12))
            throw GeometryError("cannot merge meshes with differing transforms");
        int base = static_cast<int>(out.vertices.size());
        out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
        for (const auto& f : part.faces)
            out.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
    }
    return out;
}

Mesh tessellate(const GeomRep& rep) {
    Mesh mesh = std::holds_alternative<ExtrudedSolid>(rep.shape)
                    ? tessellate_extrusion(std::get<ExtrudedSolid>(rep.shape), rep.placement)
                    : tessellate_faceted(std::get<FacetedMesh>(rep.shape), rep.placement);
    if (is_watertight(mesh) && mesh_volume(mesh) < 0)
        for (auto& f : mesh.faces) std::swap(f[1], f[2]);
    return mesh;
}

std::string write_obj(const Mesh& mesh) {
    std::string out;
    for (const auto& v : mesh.vertices) {
        out += "v ";
        out += format_double(v.x());
        out += ' ';
        out += format_double(v.y());
        out += ' ';
        out += format_double(v.z());
        out += '\n';
    }
    for (const auto& f : mesh.faces) {
        out += "f ";
        out += std::to_string(f[0] + 1);
        out += ' ';
        out += std::to_string(f[1] + 1);
        out += ' ';
        out += std::to_string(f[2] + 1);
        out += '\n';
    }
    return out;
}

Mesh read_obj(const std::string& text) {
    Mesh mesh;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw IoError("malformed OBJ vertex line: " + line);
            mesh.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) {
                std::string tok;
                if (!(ls >> tok)) throw IoError("malformed OBJ face line: " + line);
                f[k] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
            }
            mesh.faces.push_back(f);
        } // other records ignored
    }
    return mesh;
}

std::string encode_mesh(const Mesh& mesh) {
    std::string out = write_obj(mesh);
    const auto& m = mesh.transform.matrix();
    for (int r = 0; r < 4; ++r) {
        out += 't';
        for (int c = 0; c < 4; ++c) {
            out += ' ';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

Mesh decode_mesh(const std::string& text) {
    Mesh mesh;
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    int trow = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw GeometryError("malformed mesh vertex: " + line);
            mesh.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            int a, b, c;
            if (!(ls >> a >> b >> c)) throw GeometryError("malformed mesh face: " + line);
            mesh.faces.push_back({a - 1, b - 1, c - 1});
        } else if (tag == "t") {
            if (trow >= 4) throw GeometryError("too many transform rows in mesh string");
            for (int c = 0; c < 4; ++c)
                if (!(ls >> m(trow, c))) throw GeometryError("malformed transform row: " + line);
            ++trow;
        } else {
            throw GeometryError("unknown mesh record: " + line);
        }
    }
    if (trow != 0 && trow != 4) throw GeometryError("incomplete mesh transform");
    for (const auto& f : mesh.faces)
        for (int ix : f)
            if (ix < 0 || ix >= static_cast<int>(mesh.vertices.size()))
                throw GeometryError("mesh face index out of range");
    Eigen::Matrix3d rot = m.block<3, 3>(0, 0);
    if ((rot * rot.transpose() - Eigen::Matrix3d::Identity()).norm() > 1e-9 ||
        std::abs(rot.determinant() - 1.0) > 1e-9 ||
        (m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).norm() > 1e-9)
        throw GeometryError("mesh transform is not rigid");
    mesh.transform.matrix() = m;
    return mesh;
}

double ring_area(const Ring& ring) {
    double a = 0.0;
    std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = ring[i];
        const Vec2& q = ring[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return a / 2.0;
}

double cross_section_area(const CrossSection& cs) {
    double a = 0.0;
    for (const auto& poly : cs.polygons) {
        a += std::abs(ring_area(poly.outer));
        for (const auto& h : poly.holes) a -= std::abs(ring_area(h));
    }
    return a;
}

} // namespace bim2map::geom
