#include "bim2map/ifc.hpp"

#include "bim2map/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace bim2map::ifc {

using geom::Vec2;
using geom::Vec3;
using step::Instance;
using step::Value;

namespace {

// Known element entity keywords and their short names.
const std::map<std::string, std::string>& type_names() {
    static const std::map<std::string, std::string> table = {
        {"IFCWALL", "Wall"},
        {"IFCWALLSTANDARDCASE", "Wall"},
        {"IFCCOLUMN", "Column"},
        {"IFCBEAM", "Beam"},
        {"IFCSLAB", "Slab"},
        {"IFCDOOR", "Door"},
        {"IFCWINDOW", "Window"},
        {"IFCCOVERING", "Covering"},
        {"IFCSTAIR", "Stair"},
        {"IFCSTAIRFLIGHT", "StairFlight"},
        {"IFCRAILING", "Railing"},
        {"IFCROOF", "Roof"},
        {"IFCPLATE", "Plate"},
        {"IFCMEMBER", "Member"},
        {"IFCCURTAINWALL", "CurtainWall"},
        {"IFCFOOTING", "Footing"},
        {"IFCPILE", "Pile"},
        {"IFCRAMP", "Ramp"},
        {"IFCRAMPFLIGHT", "RampFlight"},
        {"IFCBUILDINGELEMENTPROXY", "BuildingElementProxy"},
        {"IFCBUILDINGELEMENTPART", "BuildingElementPart"},
        {"IFCFURNISHINGELEMENT", "FurnishingElement"},
        {"IFCFURNITURE", "Furniture"},
        {"IFCSYSTEMFURNITUREELEMENT", "SystemFurnitureElement"},
        {"IFCOPENINGELEMENT", "OpeningElement"},
        {"IFCFLOWTERMINAL", "FlowTerminal"},
        {"IFCFLOWSEGMENT", "FlowSegment"},
        {"IFCFLOWFITTING", "FlowFitting"},
        {"IFCFLOWCONTROLLER", "FlowController"},
        {"IFCFLOWMOVINGDEVICE", "FlowMovingDevice"},
        {"IFCFLOWSTORAGEDEVICE", "FlowStorageDevice"},
        {"IFCFLOWTREATMENTDEVICE", "FlowTreatmentDevice"},
        {"IFCENERGYCONVERSIONDEVICE", "EnergyConversionDevice"},
        {"IFCDISTRIBUTIONELEMENT", "DistributionElement"},
        {"IFCDISTRIBUTIONFLOWELEMENT", "DistributionFlowElement"},
        {"IFCDISTRIBUTIONCONTROLELEMENT", "DistributionControlElement"},
        {"IFCELEMENTASSEMBLY", "ElementAssembly"},
        {"IFCTRANSPORTELEMENT", "TransportElement"},
        {"IFCVIRTUALELEMENT", "VirtualElement"},
        {"IFCDISCRETEACCESSORY", "DiscreteAccessory"},
        {"IFCFASTENER", "Fastener"},
        {"IFCMECHANICALFASTENER", "MechanicalFastener"},
        {"IFCREINFORCINGBAR", "ReinforcingBar"},
        {"IFCREINFORCINGMESH", "ReinforcingMesh"},
        {"IFCTENDON", "Tendon"},
        {"IFCELECTRICALELEMENT", "ElectricalElement"},
        {"IFCEQUIPMENTELEMENT", "EquipmentElement"},
        {"IFCSHADINGDEVICE", "ShadingDevice"},
        {"IFCCHIMNEY", "Chimney"},
        {"IFCCIVILELEMENT", "CivilElement"},
        {"IFCGEOGRAPHICELEMENT", "GeographicElement"},
    };
    return table;
}

struct Unsupported {
    std::string reason;
};

struct Decoder {
    const step::Model& m;
    IfcModel out;
    double scale = 1.0;

    std::map<std::int64_t, IfcSpaceRec> spaces;
    std::map<std::int64_t, IfcElementRec> elements;

    explicit Decoder(const step::Model& model) : m(model) {}

    void warn(std::string msg) { out.warnings.push_back(std::move(msg)); }

    static std::string ref(std::int64_t id) { return "#" + std::to_string(id); }

    // ---- primitive attribute decoding -------------------------------------

    std::optional<std::string> opt_string(const Value& v) const {
        if (auto* s = v.as_string()) return *s;
        return std::nullopt;
    }

    Vec3 decode_point3(const Instance& pt) const {
        auto* list = pt.attr(0).as_list();
        if (!list || list->items.empty()) throw Unsupported{"point without coordinates"};
        Vec3 p = Vec3::Zero();
        for (std::size_t i = 0; i < list->items.size() && i < 3; ++i) {
            auto n = list->items[i].numeric();
            if (!n) throw Unsupported{"non-numeric coordinate"};
            p[static_cast<int>(i)] = *n * scale;
        }
        return p;
    }

    Vec2 decode_point2(const Instance& pt) const {
        Vec3 p = decode_point3(pt);
        return Vec2(p.x(), p.y());
    }

    Vec3 decode_dir3(const Instance& dir) const {
        auto* list = dir.attr(0).as_list();
        if (!list || list->items.empty()) throw Unsupported{"direction without ratios"};
        Vec3 d = Vec3::Zero();
        for (std::size_t i = 0; i < list->items.size() && i < 3; ++i) {
            auto n = list->items[i].numeric();
            if (!n) throw Unsupported{"non-numeric direction ratio"};
            d[static_cast<int>(i)] = *n; // ratios are unitless
        }
        return d;
    }

    geom::Placement decode_a2p(const Instance& inst) const {
        geom::Placement p;
        const Instance* loc = m.deref(inst.attr(0));
        if (!loc || loc->type_name != "IFCCARTESIANPOINT")
            throw Unsupported{"placement without location"};
        if (inst.type_name == "IFCAXIS2PLACEMENT2D") {
            Vec2 o = decode_point2(*loc);
            p.origin = Vec3(o.x(), o.y(), 0.0);
            if (const Instance* rd = m.deref(inst.attr(1))) {
                Vec3 d = decode_dir3(*rd);
                p.ref_direction = Vec3(d.x(), d.y(), 0.0);
            }
            return p;
        }
        if (inst.type_name != "IFCAXIS2PLACEMENT3D")
            throw Unsupported{"unsupported placement " + inst.type_name};
        p.origin = decode_point3(*loc);
        if (const Instance* ax = m.deref(inst.attr(1))) p.axis = decode_dir3(*ax);
        if (const Instance* rd = m.deref(inst.attr(2))) p.ref_direction = decode_dir3(*rd);
        return p;
    }

    // ---- units -------------------------------------------------------------

    static double prefix_factor(const std::string& tag) {
        static const std::map<std::string, double> factors = {
            {"EXA", 1e18},  {"PETA", 1e15},  {"TERA", 1e12}, {"GIGA", 1e9},
            {"MEGA", 1e6},  {"KILO", 1e3},   {"HECTO", 1e2}, {"DECA", 1e1},
            {"DECI", 1e-1}, {"CENTI", 1e-2}, {"MILLI", 1e-3}, {"MICRO", 1e-6},
            {"NANO", 1e-9},
        };
        auto it = factors.find(tag);
        if (it == factors.end()) throw Unsupported{"unknown unit prefix ." + tag + "."};
        return it->second;
    }

    double unit_factor(const Instance& u, int depth = 0) const {
        if (depth > 4) throw Unsupported{"unit definition nested too deeply"};
        if (u.type_name == "IFCSIUNIT") {
            double f = 1.0;
            if (auto* pre = u.attr(2).as_enum()) f = prefix_factor(pre->tag);
            return f;
        }
        if (u.type_name == "IFCCONVERSIONBASEDUNIT") {
            const Instance* mwu = m.deref(u.attr(3));
            if (!mwu || mwu->type_name != "IFCMEASUREWITHUNIT")
                throw Unsupported{"conversion unit without measure"};
            const Value& val = mwu->attr(0);
            std::optional<double> v = val.numeric();
            if (!v)
                if (auto* typed = val.as_typed(); typed && !typed->args.empty())
                    v = typed->args[0].numeric();
            if (!v) throw Unsupported{"non-numeric conversion factor"};
            const Instance* base = m.deref(mwu->attr(1));
            double bf = base ? unit_factor(*base, depth + 1) : 1.0;
            return *v * bf;
        }
        throw Unsupported{"unsupported unit " + u.type_name};
    }

    void find_length_scale() {
        for (const auto& [id, inst] : m.instances) {
            if (inst.type_name != "IFCPROJECT") continue;
            const Instance* ua = m.deref(inst.attr(8));
            if (!ua || ua->type_name != "IFCUNITASSIGNMENT") continue;
            auto* units = ua->attr(0).as_list();
            if (!units) continue;
            for (const Value& uv : units->items) {
                const Instance* u = m.deref(uv);
                if (!u) continue;
                auto* kind = u->attr(1).as_enum();
                if (!kind || kind->tag != "LENGTHUNIT") continue;
                try {
                    scale = unit_factor(*u);
                    return;
                } catch (const Unsupported& e) {
                    warn("length unit " + ref(u->id) + ": " + e.reason + "; assuming meters");
                    return;
                }
            }
        }
        warn("no length unit found; assuming meters");
    }

    // ---- products and relationships ----------------------------------------

    void add_element(const Instance& inst) {
        IfcElementRec rec;
        rec.id = inst.id;
        rec.ifc_type = inst.type_name;
        rec.name = opt_string(inst.attr(2));
        elements.emplace(inst.id, std::move(rec));
    }

    void scan_products() {
        for (const auto& [id, inst] : m.instances) {
            if (inst.type_name == "IFCSPACE") {
                IfcSpaceRec rec;
                rec.id = id;
                rec.name = opt_string(inst.attr(2));
                spaces.emplace(id, std::move(rec));
            } else if (type_names().count(inst.type_name)) {
                add_element(inst);
            }
        }
    }

    bool is_element(std::int64_t id) const { return elements.count(id) != 0; }

    // Instances referenced where only elements make sense become elements.
    bool promote(std::int64_t id, const std::string& via) {
        if (is_element(id)) return true;
        if (spaces.count(id)) return false;
        const Instance* inst = m.find(id);
        if (!inst) return false;
        add_element(*inst);
        warn("unknown element-like type " + inst->type_name + " " + ref(id) +
             " treated as element (" + via + ")");
        return true;
    }

    void promote_referenced() {
        for (const auto& [id, inst] : m.instances) {
            if (inst.type_name == "IFCRELSPACEBOUNDARY") {
                if (auto* r = inst.attr(5).as_ref()) promote(r->id, "space boundary");
            } else if (inst.type_name == "IFCRELCONTAINEDINSPATIALSTRUCTURE") {
                const Instance* rel = m.deref(inst.attr(5));
                if (!rel || rel->type_name != "IFCSPACE") continue;
                if (auto* list = inst.attr(4).as_list())
                    for (const Value& v : list->items)
                        if (auto* r = v.as_ref()) promote(r->id, "space containment");
            }
        }
        // aggregations chain, so promote until stable
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [id, inst] : m.instances) {
                if (inst.type_name != "IFCRELAGGREGATES" && inst.type_name != "IFCRELNESTS" &&
                    inst.type_name != "IFCRELDECOMPOSES")
                    continue;
                auto* parent = inst.attr(4).as_ref();
                if (!parent || !is_element(parent->id)) continue;
                if (auto* list = inst.attr(5).as_list())
                    for (const Value& v : list->items)
                        if (auto* r = v.as_ref())
                            if (!is_element(r->id) && promote(r->id, "aggregation"))
                                changed = true;
            }
        }
    }

    void link_relationships() {
        for (const auto& [id, inst] : m.instances) {
            if (inst.type_name == "IFCRELSPACEBOUNDARY") {
                if (inst.attr(5).is_null()) continue; // virtual boundary
                auto* sp = inst.attr(4).as_ref();
                auto* el = inst.attr(5).as_ref();
                if (!sp || !el) continue;
                auto it = spaces.find(sp->id);
                if (it == spaces.end()) {
                    warn("space boundary " + ref(id) + " relates non-space " + ref(sp->id));
                    continue;
                }
                if (is_element(el->id)) it->second.bounded_by.push_back(el->id);
            } else if (inst.type_name == "IFCRELCONTAINEDINSPATIALSTRUCTURE") {
                auto* rel = inst.attr(5).as_ref();
                if (!rel) continue;
                auto it = spaces.find(rel->id);
                if (it == spaces.end()) continue; // storey/building containment
                if (auto* list = inst.attr(4).as_list())
                    for (const Value& v : list->items)
                        if (auto* r = v.as_ref())
                            if (is_element(r->id)) it->second.contains.push_back(r->id);
            } else if (inst.type_name == "IFCRELAGGREGATES" || inst.type_name == "IFCRELNESTS" ||
                       inst.type_name == "IFCRELDECOMPOSES") {
                auto* parent = inst.attr(4).as_ref();
                if (!parent || !is_element(parent->id)) continue;
                auto& subs = elements.at(parent->id).sub_elements;
                if (auto* list = inst.attr(5).as_list())
                    for (const Value& v : list->items)
                        if (auto* r = v.as_ref())
                            if (is_element(r->id) && r->id != parent->id) subs.push_back(r->id);
            } else if (inst.type_name == "IFCRELASSOCIATESMATERIAL") {
                std::optional<std::string> name;
                try {
                    name = material_name(m.deref(inst.attr(5)), 0);
                } catch (const Unsupported& e) {
                    warn("material association " + ref(id) + ": " + e.reason);
                    continue;
                }
                if (!name) continue;
                if (auto* list = inst.attr(4).as_list())
                    for (const Value& v : list->items) {
                        auto* r = v.as_ref();
                        if (!r || !is_element(r->id)) continue;
                        auto& el = elements.at(r->id);
                        if (el.material && *el.material != *name)
                            warn("conflicting material for " + ref(r->id) + ": keeping '" +
                                 *el.material + "', ignoring '" + *name + "'");
                        else
                            el.material = name;
                    }
            }
        }
        for (auto& [id, sp] : spaces) {
            dedupe(sp.bounded_by);
            dedupe(sp.contains);
        }
        for (auto& [id, el] : elements) dedupe(el.sub_elements);
        break_aggregation_cycles();
    }

    static void dedupe(std::vector<std::int64_t>& ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }

    void break_aggregation_cycles() {
        std::map<std::int64_t, int> color; // 0 new, 1 on stack, 2 done
        std::function<void(std::int64_t)> dfs = [&](std::int64_t u) {
            color[u] = 1;
            auto& subs = elements.at(u).sub_elements;
            for (auto it = subs.begin(); it != subs.end();) {
                if (color[*it] == 1) {
                    warn("aggregation cycle: dropping " + ref(u) + " -> " + ref(*it));
                    it = subs.erase(it);
                    continue;
                }
                if (color[*it] == 0) dfs(*it);
                ++it;
            }
            color[u] = 2;
        };
        for (const auto& [id, el] : elements)
            if (color[id] == 0) dfs(id);
    }

    std::optional<std::string> material_name(const Instance* mat, int depth) const {
        if (!mat) return std::nullopt;
        if (depth > 4) throw Unsupported{"material definition nested too deeply"};
        const std::string& t = mat->type_name;
        if (t == "IFCMATERIAL") {
            if (auto* s = mat->attr(0).as_string()) return *s;
            throw Unsupported{"material without name"};
        }
        if (t == "IFCMATERIALLAYERSETUSAGE") return material_name(m.deref(mat->attr(0)), depth + 1);
        if (t == "IFCMATERIALLAYER") return material_name(m.deref(mat->attr(0)), depth + 1);
        if (t == "IFCMATERIALLAYERSET" || t == "IFCMATERIALLIST") {
            auto* list = mat->attr(0).as_list();
            if (!list || list->items.empty()) throw Unsupported{t + " without entries"};
            return material_name(m.deref(list->items[0]), depth + 1); // first layer wins
        }
        throw Unsupported{"unsupported material definition " + t};
    }

    // ---- placement ----------------------------------------------------------

    geom::PlacementChain decode_placement_chain(const Value& v, std::int64_t owner) {
        std::vector<geom::Placement> leaf_to_root;
        std::set<std::int64_t> seen;
        const Instance* cur = m.deref(v);
        while (cur) {
            if (!seen.insert(cur->id).second) {
                warn("placement cycle at " + ref(cur->id) + " for " + ref(owner));
                break;
            }
            if (cur->type_name != "IFCLOCALPLACEMENT") {
                warn("unsupported placement " + cur->type_name + " for " + ref(owner));
                break;
            }
            if (const Instance* rel = m.deref(cur->attr(1))) {
                try {
                    leaf_to_root.push_back(decode_a2p(*rel));
                } catch (const Unsupported& e) {
                    warn("placement " + ref(cur->id) + " for " + ref(owner) + ": " + e.reason);
                }
            }
            cur = m.deref(cur->attr(0));
        }
        return geom::PlacementChain(leaf_to_root.rbegin(), leaf_to_root.rend());
    }

    // ---- geometry -----------------------------------------------------------

    std::vector<Vec2> decode_profile(const Instance& prof) const {
        if (prof.type_name == "IFCRECTANGLEPROFILEDEF") {
            auto xd = prof.attr(3).numeric();
            auto yd = prof.attr(4).numeric();
            if (!xd || !yd) throw Unsupported{"rectangle profile without dimensions"};
            double hx = *xd * scale / 2, hy = *yd * scale / 2;
            Vec2 o(0, 0), ux(1, 0);
            if (const Instance* pos = m.deref(prof.attr(2))) {
                geom::Placement p = decode_a2p(*pos);
                o = Vec2(p.origin.x(), p.origin.y());
                if (p.ref_direction) {
                    Vec2 d(p.ref_direction->x(), p.ref_direction->y());
                    if (d.norm() < 1e-12) throw Unsupported{"degenerate profile axis"};
                    ux = d.normalized();
                }
            }
            Vec2 uy(-ux.y(), ux.x());
            std::vector<Vec2> corners = {{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}};
            for (auto& c : corners) c = o + ux * c.x() + uy * c.y();
            return corners;
        }
        if (prof.type_name == "IFCARBITRARYCLOSEDPROFILEDEF") {
            const Instance* curve = m.deref(prof.attr(2));
            if (!curve || curve->type_name != "IFCPOLYLINE")
                throw Unsupported{"profile outer curve must be a polyline"};
            auto* pts = curve->attr(0).as_list();
            if (!pts) throw Unsupported{"polyline without points"};
            std::vector<Vec2> ring;
            for (const Value& pv : pts->items) {
                const Instance* pt = m.deref(pv);
                if (!pt || pt->type_name != "IFCCARTESIANPOINT")
                    throw Unsupported{"polyline point unresolved"};
                ring.push_back(decode_point2(*pt));
            }
            return ring;
        }
        throw Unsupported{"unsupported profile " + prof.type_name};
    }

    geom::GeomRep decode_extruded(const Instance& item) const {
        const Instance* prof = m.deref(item.attr(0));
        if (!prof) throw Unsupported{"extrusion without profile"};
        geom::ExtrudedSolid solid;
        solid.profile = decode_profile(*prof);
        const Instance* dir = m.deref(item.attr(2));
        if (!dir) throw Unsupported{"extrusion without direction"};
        solid.direction = decode_dir3(*dir);
        auto depth = item.attr(3).numeric();
        if (!depth) throw Unsupported{"extrusion without depth"};
        solid.depth = *depth * scale;
        geom::GeomRep rep;
        rep.shape = std::move(solid);
        if (const Instance* pos = m.deref(item.attr(1)))
            rep.placement = geom::make_axis_placement(decode_a2p(*pos));
        return rep;
    }

    geom::GeomRep decode_brep(const Instance& item) const {
        const Instance* shell = m.deref(item.attr(0));
        if (!shell || shell->type_name != "IFCCLOSEDSHELL")
            throw Unsupported{"brep without closed shell"};
        auto* faces = shell->attr(0).as_list();
        if (!faces) throw Unsupported{"shell without faces"};
        geom::FacetedMesh fm;
        std::map<std::tuple<double, double, double>, int> vert_ix; // weld identical points
        auto index_of = [&](const Vec3& p) {
            auto [it, added] = vert_ix.try_emplace({p.x(), p.y(), p.z()},
                                                   static_cast<int>(fm.vertices.size()));
            if (added) fm.vertices.push_back(p);
            return it->second;
        };
        for (const Value& fv : faces->items) {
            const Instance* face = m.deref(fv);
            if (!face || face->type_name != "IFCFACE") throw Unsupported{"unresolved face"};
            auto* bounds = face->attr(0).as_list();
            if (!bounds || bounds->items.size() != 1)
                throw Unsupported{"face with inner bounds"};
            const Instance* bound = m.deref(bounds->items[0]);
            if (!bound || (bound->type_name != "IFCFACEOUTERBOUND" &&
                           bound->type_name != "IFCFACEBOUND"))
                throw Unsupported{"unresolved face bound"};
            const Instance* loop = m.deref(bound->attr(0));
            if (!loop || loop->type_name != "IFCPOLYLOOP") throw Unsupported{"face without loop"};
            auto* pts = loop->attr(0).as_list();
            if (!pts || pts->items.size() < 3) throw Unsupported{"short polygon loop"};
            std::vector<int> poly;
            for (const Value& pv : pts->items) {
                const Instance* pt = m.deref(pv);
                if (!pt || pt->type_name != "IFCCARTESIANPOINT")
                    throw Unsupported{"loop point unresolved"};
                poly.push_back(index_of(decode_point3(*pt)));
            }
            if (auto* orient = bound->attr(1).as_enum(); orient && orient->tag == "F")
                std::reverse(poly.begin(), poly.end());
            fm.faces.push_back(std::move(poly));
        }
        geom::GeomRep rep;
        rep.shape = std::move(fm);
        return rep;
    }

    geom::GeomRep decode_triangulated(const Instance& item) const {
        const Instance* coords = m.deref(item.attr(0));
        if (!coords || coords->type_name != "IFCCARTESIANPOINTLIST3D")
            throw Unsupported{"face set without 3d point list"};
        auto* rows = coords->attr(0).as_list();
        if (!rows) throw Unsupported{"point list without rows"};
        geom::FacetedMesh fm;
        for (const Value& rv : rows->items) {
            auto* row = rv.as_list();
            if (!row || row->items.size() != 3) throw Unsupported{"malformed coordinate row"};
            Vec3 p;
            for (int i = 0; i < 3; ++i) {
                auto n = row->items[i].numeric();
                if (!n) throw Unsupported{"non-numeric coordinate"};
                p[i] = *n * scale;
            }
            fm.vertices.push_back(p);
        }
        auto* tris = item.attr(3).as_list();
        if (!tris) throw Unsupported{"face set without indices"};
        for (const Value& tv : tris->items) {
            auto* tri = tv.as_list();
            if (!tri || tri->items.size() != 3) throw Unsupported{"malformed face row"};
            std::vector<int> f;
            for (int i = 0; i < 3; ++i) {
                auto n = tri->items[i].as_int();
                if (!n) throw Unsupported{"non-integer face index"};
                f.push_back(static_cast<int>(*n - 1)); // one-based
            }
            fm.faces.push_back(std::move(f));
        }
        geom::GeomRep rep;
        rep.shape = std::move(fm);
        return rep;
    }

    void decode_geometry(IfcElementRec& el, const Instance& inst) {
        const Instance* pds = m.deref(inst.attr(6));
        if (!pds) return; // no representation at all
        if (pds->type_name != "IFCPRODUCTDEFINITIONSHAPE") {
            el.geometry_unsupported = true;
            warn("element " + ref(el.id) + ": unsupported representation " + pds->type_name);
            return;
        }
        auto* reps = pds->attr(2).as_list();
        if (!reps) return;
        const Instance* body = nullptr;
        for (const Value& rv : reps->items) {
            const Instance* sr = m.deref(rv);
            if (!sr || sr->type_name != "IFCSHAPEREPRESENTATION") continue;
            if (!body) body = sr;
            if (auto* ident = sr->attr(1).as_string()) {
                std::string low = *ident;
                std::transform(low.begin(), low.end(), low.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                if (low == "body") {
                    body = sr;
                    break;
                }
            }
        }
        if (!body) return;
        auto* items = body->attr(3).as_list();
        if (!items) return;
        for (const Value& iv : items->items) {
            const Instance* item = m.deref(iv);
            if (!item) continue;
            try {
                if (item->type_name == "IFCEXTRUDEDAREASOLID")
                    el.geometry.push_back(decode_extruded(*item));
                else if (item->type_name == "IFCFACETEDBREP")
                    el.geometry.push_back(decode_brep(*item));
                else if (item->type_name == "IFCTRIANGULATEDFACESET")
                    el.geometry.push_back(decode_triangulated(*item));
                else
                    throw Unsupported{"representation item " + item->type_name};
            } catch (const Unsupported& e) {
                el.geometry_unsupported = true;
                warn("element " + ref(el.id) + ": " + e.reason);
            } catch (const GeometryError& e) {
                el.geometry_unsupported = true;
                warn("element " + ref(el.id) + ": " + std::string(e.what()));
            }
        }
    }

    void decode_products() {
        for (auto& [id, el] : elements) {
            const Instance& inst = *m.find(id);
            el.placement = decode_placement_chain(inst.attr(5), id);
            decode_geometry(el, inst);
        }
    }

    IfcModel finish() {
        for (auto& [id, sp] : spaces) out.spaces.push_back(std::move(sp));
        for (auto& [id, el] : elements) out.elements.push_back(std::move(el));
        return std::move(out);
    }
};

} // namespace

const IfcElementRec* IfcModel::element(std::int64_t id) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), id,
                               [](const IfcElementRec& e, std::int64_t v) { return e.id < v; });
    return it != elements.end() && it->id == id ? &*it : nullptr;
}

const IfcSpaceRec* IfcModel::space(std::int64_t id) const {
    auto it = std::lower_bound(spaces.begin(), spaces.end(), id,
                               [](const IfcSpaceRec& s, std::int64_t v) { return s.id < v; });
    return it != spaces.end() && it->id == id ? &*it : nullptr;
}

std::string element_type_name(const std::string& ifc_keyword) {
    auto it = type_names().find(ifc_keyword);
    if (it != type_names().end()) return it->second;
    std::string rest = ifc_keyword;
    if (rest.rfind("IFC", 0) == 0) rest = rest.substr(3);
    if (rest.empty()) return "Element";
    std::string name(1, static_cast<char>(std::toupper(static_cast<unsigned char>(rest[0]))));
    for (std::size_t i = 1; i < rest.size(); ++i)
        name += static_cast<char>(std::tolower(static_cast<unsigned char>(rest[i])));
    return name;
}

IfcModel decode_ifc(const step::Model& model) {
    Decoder d(model);
    if (model.header.schema.rfind("IFC", 0) != 0)
        d.warn("unrecognized schema '" + model.header.schema + "'");
    d.find_length_scale();
    d.scan_products();
    d.promote_referenced();
    d.link_relationships();
    d.decode_products();
    return d.finish();
}

} // namespace bim2map::ifc
