#include "bim2map/errors.hpp"
#include "bim2map/filter_expr.hpp"
#include "bim2map/ifc.hpp"
#include "bim2map/map_gen.hpp"
#include "bim2map/step.hpp"
#include "bim2map/world_model.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace bim2map;

constexpr int kExitOk = 0;
constexpr int kExitProcessing = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool verbose() {
    const char* v = std::getenv("BIM2MAP_LOG");
    if (!v) return false;
    std::string s(v);
    return !s.empty() && s != "0" && s != "off" && s != "quiet" && s != "error";
}

void log_warnings(const std::vector<std::string>& warnings) {
    if (!verbose()) return;
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    if (!text.empty() && text.back() != '\n') ++n;
    return n;
}

std::string stem_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

std::set<std::string> parse_type_list(const std::string& csv) {
    std::set<std::string> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = item.find_last_not_of(" \t");
        out.insert(item.substr(b, e - b + 1));
    }
    return out;
}

// --filter takes the expression inline, or @path to read it from a file
wm::ElementFilter resolve_filter(const std::string& arg) {
    std::string expr = arg;
    if (!arg.empty() && arg[0] == '@') expr = read_file(arg.substr(1));
    try {
        return wm::parse_filter(expr);
    } catch (const FilterParseError& e) {
        throw UsageError(e.what());
    }
}

struct GraphStats {
    std::size_t input_lines = 0;
};

wm::Graph load_graph(const std::string& path, const std::set<std::string>& static_types,
                     GraphStats* stats = nullptr) {
    const std::string text = read_file(path);
    if (stats) stats->input_lines = count_lines(text);
    if (path.ends_with(".ttl")) {
        wm::Graph g = wm::from_turtle(text);
        log_warnings(g.warnings);
        return g;
    }
    step::Model sm = step::parse_step(text);
    ifc::IfcModel m = ifc::decode_ifc(sm);
    log_warnings(m.warnings);
    wm::Graph g = wm::build_graph(m, static_types);
    log_warnings(g.warnings);
    return g;
}

std::size_t count_elements(const wm::Graph& g) {
    std::size_t n = 0;
    for (const auto& t : g.triples)
        if (t.predicate == wm::pred::type && t.object_kind == wm::ObjKind::Node &&
            t.object != "Space")
            ++n;
    return n;
}

struct MapOptions {
    std::string input;
    std::string output = "map";
    std::string preset;
    std::string filter_arg;
    std::string static_types_arg;
    double height = 0;
    double z_floor = 0;
    double resolution = 0;
    double margin = 0;
    bool has_height = false, has_z_floor = false, has_resolution = false, has_margin = false,
         has_filter = false;
};

void add_map_flags(CLI::App* cmd, MapOptions& opt) {
    cmd->add_option("input", opt.input, "graph (.ttl) or model (.ifc) file")->required();
    cmd->add_option("-o,--output", opt.output, "output basename (writes <base>.pgm + <base>.yaml)");
    cmd->add_option("--height", opt.height, "slice height in meters")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--z-floor", opt.z_floor, "story base elevation in meters");
    cmd->add_option("--resolution", opt.resolution, "cell size in meters")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--margin", opt.margin, "padding around content in meters")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--filter", opt.filter_arg, "element filter expression, or @file");
    cmd->add_option("--static-types", opt.static_types_arg,
                    "comma-separated type names treated as static (.ifc input only)");
    cmd->add_option("--preset", opt.preset, "named configuration")
        ->check(CLI::IsMember({"neuron-loc", "neuron-nav", "lab-loc", "lab-nav"}));
}

mapgen::MapSpec spec_from(const MapOptions& opt, CLI::App* cmd, mapgen::MapKind kind) {
    mapgen::MapSpec spec;
    spec.kind = kind;
    if (!opt.preset.empty()) {
        if (opt.preset == "neuron-loc") {
            spec.height = 0.5;
            spec.filter.exclude_types = {"OpeningElement", "FurnishingElement",
                                         "BuildingElementProxy", "FlowTerminal"};
            spec.filter.exclude_materials = {"Glass"};
        } else if (opt.preset == "neuron-nav") {
            spec.height = 1.5;
        } else if (opt.preset == "lab-loc") {
            spec.height = 0.1;
            spec.filter.include_all = false;
            spec.filter.include_types = {"Wall"};
        } else { // lab-nav
            spec.height = 0.5;
            spec.filter.include_all = false;
            spec.filter.include_types = {"Wall"};
        }
        const bool loc_preset = opt.preset.ends_with("-loc");
        if (loc_preset != (kind == mapgen::MapKind::Localization))
            throw UsageError("preset " + opt.preset + " does not fit this map kind");
    }
    if (cmd->count("--height")) spec.height = opt.height;
    if (cmd->count("--z-floor")) spec.z_floor = opt.z_floor;
    if (cmd->count("--resolution")) spec.resolution = opt.resolution;
    if (cmd->count("--margin")) spec.margin = opt.margin;
    if (cmd->count("--filter")) spec.filter = resolve_filter(opt.filter_arg);
    return spec;
}

int run_map(const MapOptions& opt, CLI::App* cmd, mapgen::MapKind kind) {
    mapgen::MapSpec spec = spec_from(opt, cmd, kind);
    std::set<std::string> static_types = wm::default_static_types();
    if (cmd->count("--static-types")) static_types = parse_type_list(opt.static_types_arg);
    wm::Graph g = load_graph(opt.input, static_types);
    mapgen::OccupancyGrid grid = kind == mapgen::MapKind::Localization
                                     ? mapgen::gen_localization_map(g, spec)
                                     : mapgen::gen_navigation_map(g, spec);
    log_warnings(grid.warnings);
    mapgen::write_grid(grid, opt.output);
    std::cout << "wrote " << opt.output << ".pgm + " << opt.output << ".yaml\n"
              << "grid " << grid.width << "x" << grid.height << " cells @ " << grid.resolution
              << " m, " << grid.occupied_count() << " occupied\n";
    return kExitOk;
}

int run_build_graph(const std::string& input, const std::string& output,
                    const std::string& static_types_arg, bool has_static_types) {
    const std::string text = read_file(input);
    step::Model sm = step::parse_step(text);
    ifc::IfcModel m = ifc::decode_ifc(sm);
    log_warnings(m.warnings);
    std::set<std::string> static_types =
        has_static_types ? parse_type_list(static_types_arg) : wm::default_static_types();
    wm::Graph g = wm::build_graph(m, static_types);
    log_warnings(g.warnings);

    std::string out = output.empty() ? stem_of(input) + ".ttl" : output;
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot write " + out);
    f << wm::to_turtle(g);
    f.close();
    if (!f) throw IoError("cannot write " + out);
    std::cout << "wrote " << out << "\n"
              << m.elements.size() << " elements, " << g.triples.size() << " triples\n";
    return kExitOk;
}

int run_stats(const std::string& input) {
    GraphStats st;
    wm::Graph g = load_graph(input, wm::default_static_types(), &st);
    std::cout << "input_lines " << st.input_lines << "\n"
              << "triples " << g.triples.size() << "\n"
              << "elements " << count_elements(g) << "\n"
              << "meshes " << g.geometry.size() << "\n";
    return kExitOk;
}

int run_query(const std::string& input, const std::string& filter_arg) {
    wm::ElementFilter filter = resolve_filter(filter_arg);
    wm::Graph g = load_graph(input, wm::default_static_types());
    std::vector<wm::QueryHit> hits;
    try {
        hits = wm::query(g, filter);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    for (const auto& hit : hits) {
        auto type = g.object_of(hit.node, wm::pred::type);
        auto material = g.object_of(hit.node, wm::pred::has_material);
        std::cout << hit.node << "\t" << type.value_or("-") << "\t" << material.value_or("-")
                  << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BIM graph world models and occupancy-grid maps from IFC files"};
    app.require_subcommand(1);

    std::string bg_input, bg_output, bg_static_types;
    CLI::App* build_graph = app.add_subcommand("build-graph", "decode an IFC file into a Turtle graph");
    build_graph->add_option("input", bg_input, "IFC (.ifc) file")->required();
    build_graph->add_option("-o,--output", bg_output, "output .ttl path (default: <input stem>.ttl)");
    build_graph->add_option("--static-types", bg_static_types,
                            "comma-separated type names treated as static");

    std::string stats_input;
    CLI::App* stats = app.add_subcommand("stats", "print model complexity statistics");
    stats->add_option("input", stats_input, "graph (.ttl) or model (.ifc) file")->required();

    MapOptions loc_opt, nav_opt;
    CLI::App* loc = app.add_subcommand("loc-map", "generate a localization map (thin slab slice)");
    add_map_flags(loc, loc_opt);
    CLI::App* nav = app.add_subcommand("nav-map", "generate a navigation map (robot-height cuboid)");
    add_map_flags(nav, nav_opt);

    std::string q_input, q_filter;
    CLI::App* query = app.add_subcommand("query", "list elements matching a filter");
    query->add_option("input", q_input, "graph (.ttl) or model (.ifc) file")->required();
    query->add_option("filter", q_filter, "filter expression, or @file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build_graph->parsed())
            return run_build_graph(bg_input, bg_output, bg_static_types,
                                   build_graph->count("--static-types") > 0);
        if (stats->parsed()) return run_stats(stats_input);
        if (loc->parsed()) return run_map(loc_opt, loc, mapgen::MapKind::Localization);
        if (nav->parsed()) return run_map(nav_opt, nav, mapgen::MapKind::Navigation);
        if (query->parsed()) return run_query(q_input, q_filter);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FilterParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProcessing;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProcessing;
    }
    return kExitUsage;
}
