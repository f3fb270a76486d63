#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bim2map::geom {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Transform = Eigen::Isometry3d; // rigid, local -> global

// One local placement level: origin plus optional local z axis / local x hint.
struct Placement {
    Vec3 origin = Vec3::Zero();
    std::optional<Vec3> axis;          // local z, defaults to (0,0,1)
    std::optional<Vec3> ref_direction; // local x hint, defaults to (1,0,0)
};
// Root placement first; the composed transform maps leaf-local to global.
using PlacementChain = std::vector<Placement>;

Transform make_axis_placement(const Placement& p);        // throws GeometryError
Transform compose_transform(const PlacementChain& chain); // identity for empty chain

// Profile polygon lives in the placement's XY plane; direction is in the same frame.
struct ExtrudedSolid {
    std::vector<Vec2> profile; // closed, >= 3 distinct vertices
    Vec3 direction = Vec3(0, 0, 1);
    double depth = 0.0; // meters
};
struct FacetedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces; // planar polygons, 0-based indices
};
struct GeomRep {
    std::variant<ExtrudedSolid, FacetedMesh> shape;
    Transform placement = Transform::Identity(); // representation -> object frame
};

struct Mesh {
    std::vector<Vec3> vertices;              // local frame, meters
    std::vector<std::array<int, 3>> faces;   // CCW seen from outside
    Transform transform = Transform::Identity(); // local -> global

    bool empty() const { return faces.empty(); }
};

// Edge set derived from faces: undirected pairs (i<j), sorted, unique.
std::vector<std::pair<int, int>> mesh_edges(const Mesh& mesh);
// Every undirected edge is used exactly once in each direction.
bool is_watertight(const Mesh& mesh);
// Signed volume (divergence theorem), local frame.
double mesh_volume(const Mesh& mesh);
// Concatenates parts; all parts must share one transform.
Mesh merge_meshes(const std::vector<Mesh>& parts);

// Triangulates the supported solid kinds. Resulting vertices are in the object
// frame (rep placement baked in); transform is left identity for the caller.
Mesh tessellate(const GeomRep& rep); // throws GeometryError on degenerate input

// Strict interior test in the global frame; ray parity with retry on grazing
// hits. Points on the surface (within 1e-12) are outside.
bool point_in_mesh(const Mesh& mesh, const Vec3& point); // throws GeometryError if not watertight

// ASCII OBJ interchange (v/f records only; the transform is not carried).
std::string write_obj(const Mesh& mesh);
Mesh read_obj(const std::string& text);

// Graph payload codec: "v x y z" / "f a b c" (1-based) / four "t r0 r1 r2 r3"
// rows of the homogeneous transform. Shortest round-trip number formatting,
// so encode(decode(s)) == s for canonical strings.
std::string encode_mesh(const Mesh& mesh);
Mesh decode_mesh(const std::string& text);

using Ring = std::vector<Vec2>; // closed implicitly (last joins first)
struct PolygonWithHoles {
    Ring outer;              // counter-clockwise
    std::vector<Ring> holes; // clockwise
};
struct CrossSection {
    std::vector<PolygonWithHoles> polygons;
    std::int64_t source_element = 0;
};

double ring_area(const Ring& ring); // signed, CCW positive
double cross_section_area(const CrossSection& cs);

// Snap-rounds to a 1e-7 m grid, then unions; output follows the ring
// orientation conventions above.
std::vector<PolygonWithHoles> union_polygons(const std::vector<PolygonWithHoles>& polys);
// Boundary-inclusive membership against a set of polygons with holes.
bool point_in_polygons(const std::vector<PolygonWithHoles>& polys, const Vec2& p);
// Intersection with an axis-aligned box {xmin, ymin, xmax, ymax}.
std::vector<PolygonWithHoles> clip_polygons_to_box(const std::vector<PolygonWithHoles>& polys,
                                                   const std::array<double, 4>& box);

struct Slab {
    double z_low = 0.0;
    double z_high = 0.0;                          // z_low <= z_high, global frame
    std::optional<std::array<double, 4>> xy_bounds; // xmin, ymin, xmax, ymax
};

// XY footprint of slab ∩ mesh (closed slab: touching counts), as cleaned
// unioned polygons in the global frame.
CrossSection slab_cross_section(const Mesh& mesh, const Slab& slab);

} // namespace bim2map::geom
