#pragma once

#include "bim2map/geometry.hpp"
#include "bim2map/ifc.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bim2map::wm {

enum class ObjKind { Node, Literal, Boolean };

struct Triple {
    std::string subject;   // node id
    std::string predicate; // canonical name below, or a full IRI for foreign triples
    ObjKind object_kind = ObjKind::Node;
    std::string object; // node id / literal text / "true"|"false"

    auto operator<=>(const Triple&) const = default;
};

// Canonical predicate names.
namespace pred {
inline constexpr const char* type = "type";
inline constexpr const char* adjacent = "adjacent";
inline constexpr const char* contains = "contains";
inline constexpr const char* has_geometry = "hasGeometry";
inline constexpr const char* has_material = "hasMaterial";
inline constexpr const char* is_static = "isStatic";
inline constexpr const char* has_sub_element = "hasSubElement";
} // namespace pred

struct Graph {
    std::set<Triple> triples;
    std::map<std::string, geom::Mesh> geometry; // node id -> mesh (transform included)
    std::vector<std::string> warnings;

    // First object of (subject, predicate), if any.
    std::optional<std::string> object_of(const std::string& subject,
                                         const std::string& predicate) const;
    bool operator==(const Graph& o) const {
        return triples == o.triples; // geometry store is derivable from hasGeometry triples
    }
};

struct ElementFilter {
    bool include_all = true;             // when false, include_types applies
    std::set<std::string> include_types;
    std::set<std::string> exclude_types;
    std::set<std::string> exclude_materials;
    std::optional<bool> require_static;
};

struct QueryHit {
    std::string node;
    geom::Mesh mesh; // transform carries local -> global
};

const std::set<std::string>& default_static_types();

// Emits, per space: one type triple plus adjacent/contains edges; per element:
// type, optional hasGeometry (mesh string) and hasMaterial, one isStatic by
// static_types membership, and hasSubElement edges.
Graph build_graph(const ifc::IfcModel& ifc, const std::set<std::string>& static_types);

// Geometry-bearing elements whose type/material/static flag pass the filter;
// name matching is case-insensitive; absent material is never excluded.
// Sorted by node id. Throws on include/exclude overlap.
std::vector<QueryHit> query(const Graph& graph, const ElementFilter& filter);

std::string to_turtle(const Graph& graph); // deterministic, byte-stable
Graph from_turtle(const std::string& text); // throws TurtleParseError

} // namespace bim2map::wm
