#pragma once

#include "bim2map/geometry.hpp"
#include "bim2map/step.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bim2map::ifc {

struct IfcSpaceRec {
    std::int64_t id = 0;
    std::optional<std::string> name;
    std::vector<std::int64_t> bounded_by; // element ids, deduped, id order
    std::vector<std::int64_t> contains;   // element ids, deduped, id order
};

struct IfcElementRec {
    std::int64_t id = 0;
    std::string ifc_type; // uppercase entity keyword, e.g. IFCWALL
    std::optional<std::string> name;
    std::optional<std::string> material;
    std::vector<geom::GeomRep> geometry;     // items of the chosen body representation
    geom::PlacementChain placement;          // root first
    std::vector<std::int64_t> sub_elements;  // acyclic
    bool geometry_unsupported = false;       // some representation item was out of subset
};

struct IfcModel {
    std::vector<IfcSpaceRec> spaces;     // id order
    std::vector<IfcElementRec> elements; // id order
    std::vector<std::string> warnings;

    const IfcElementRec* element(std::int64_t id) const;
    const IfcSpaceRec* space(std::int64_t id) const;
};

// Short type name used by the graph and filters: IFCWALL / IFCWALLSTANDARDCASE
// -> "Wall", IFCBUILDINGELEMENTPROXY -> "BuildingElementProxy", unknown
// keywords -> capitalized remainder.
std::string element_type_name(const std::string& ifc_keyword);

IfcModel decode_ifc(const step::Model& model);

} // namespace bim2map::ifc
