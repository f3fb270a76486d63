#include "bim2map/world_model.hpp"

#include "bim2map/errors.hpp"

#include <algorithm>
#include <cctype>

namespace bim2map::wm {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
        out += ok ? c : '_';
    }
    return out;
}

std::set<std::string> lowered(const std::set<std::string>& names) {
    std::set<std::string> out;
    for (const auto& n : names) out.insert(lower(n));
    return out;
}

} // namespace

std::optional<std::string> Graph::object_of(const std::string& subject,
                                            const std::string& predicate) const {
    auto it = triples.lower_bound(Triple{subject, predicate, ObjKind::Node, ""});
    if (it != triples.end() && it->subject == subject && it->predicate == predicate)
        return it->object;
    return std::nullopt;
}

const std::set<std::string>& default_static_types() {
    static const std::set<std::string> types = {"Wall",  "Column",   "Slab",  "Beam", "Door",
                                                "Window", "Covering", "Stair", "Railing"};
    return types;
}

Graph build_graph(const ifc::IfcModel& ifc, const std::set<std::string>& static_types) {
    Graph g;
    std::set<std::string> statics = lowered(static_types);

    std::map<std::int64_t, std::string> space_node, elem_node;
    std::set<std::string> used;
    auto assign = [&](std::int64_t id, const std::optional<std::string>& name,
                      const char* fallback) {
        std::string base = name ? sanitize(*name) : "";
        if (base.empty()) base = fallback + std::to_string(id);
        std::string node = base;
        if (!used.insert(node).second) {
            node = base + "_" + std::to_string(id);
            used.insert(node);
        }
        return node;
    };
    for (const auto& sp : ifc.spaces) space_node[sp.id] = assign(sp.id, sp.name, "space");
    for (const auto& el : ifc.elements) elem_node[el.id] = assign(el.id, el.name, "el");

    for (const auto& sp : ifc.spaces) {
        const std::string& node = space_node[sp.id];
        g.triples.insert({node, pred::type, ObjKind::Node, "Space"});
        for (std::int64_t id : sp.bounded_by)
            g.triples.insert({node, pred::adjacent, ObjKind::Node, elem_node[id]});
        for (std::int64_t id : sp.contains)
            g.triples.insert({node, pred::contains, ObjKind::Node, elem_node[id]});
    }

    for (const auto& el : ifc.elements) {
        const std::string& node = elem_node[el.id];
        std::string type_name = ifc::element_type_name(el.ifc_type);
        g.triples.insert({node, pred::type, ObjKind::Node, type_name});

        geom::Transform xf = geom::Transform::Identity();
        try {
            xf = geom::compose_transform(el.placement);
        } catch (const GeometryError& e) {
            g.warnings.push_back("element " + node + ": " + e.what() + "; using identity");
        }
        std::vector<geom::Mesh> parts;
        for (const auto& rep : el.geometry) {
            try {
                geom::Mesh part = geom::tessellate(rep);
                if (!part.empty()) parts.push_back(std::move(part));
            } catch (const GeometryError& e) {
                g.warnings.push_back("element " + node + ": " + e.what());
            }
        }
        geom::Mesh mesh = geom::merge_meshes(parts);
        if (!mesh.empty()) {
            mesh.transform = xf;
            g.triples.insert({node, pred::has_geometry, ObjKind::Literal, geom::encode_mesh(mesh)});
            g.geometry[node] = std::move(mesh);
        } else {
            g.warnings.push_back("element " + node + " has no geometry");
        }

        if (el.material)
            g.triples.insert({node, pred::has_material, ObjKind::Literal, *el.material});
        bool is_static = statics.count(lower(type_name)) != 0;
        g.triples.insert({node, pred::is_static, ObjKind::Boolean, is_static ? "true" : "false"});
        for (std::int64_t sub : el.sub_elements)
            g.triples.insert({node, pred::has_sub_element, ObjKind::Node, elem_node[sub]});
    }
    return g;
}

std::vector<QueryHit> query(const Graph& graph, const ElementFilter& filter) {
    std::set<std::string> inc = lowered(filter.include_types);
    std::set<std::string> exc = lowered(filter.exclude_types);
    std::set<std::string> excm = lowered(filter.exclude_materials);
    if (!filter.include_all)
        for (const auto& t : inc)
            if (exc.count(t)) throw Error("filter both includes and excludes type '" + t + "'");

    std::vector<QueryHit> hits;
    for (const auto& [node, mesh] : graph.geometry) {
        auto type = graph.object_of(node, pred::type);
        std::string lt = type ? lower(*type) : "";
        if (!filter.include_all && !inc.count(lt)) continue;
        if (exc.count(lt)) continue;
        if (auto mat = graph.object_of(node, pred::has_material); mat && excm.count(lower(*mat)))
            continue;
        if (filter.require_static) {
            auto st = graph.object_of(node, pred::is_static);
            if (!st || *st != (*filter.require_static ? "true" : "false")) continue;
        }
        hits.push_back({node, mesh});
    }
    return hits;
}

} // namespace bim2map::wm
