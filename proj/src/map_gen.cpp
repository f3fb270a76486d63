#include "bim2map/map_gen.hpp"

#include "bim2map/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bim2map::mapgen {

std::size_t OccupancyGrid::occupied_count() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](std::uint8_t c) { return c != 0; }));
}

namespace {

OccupancyGrid rasterize(const wm::Graph& graph, const MapSpec& spec, double z_low, double z_high) {
    if (!(spec.resolution > 0)) throw Error("resolution must be positive");
    if (spec.margin < 0) throw Error("margin must be non-negative");

    OccupancyGrid grid;
    grid.resolution = spec.resolution;

    std::vector<geom::PolygonWithHoles> pieces;
    for (const auto& hit : wm::query(graph, spec.filter)) {
        try {
            geom::CrossSection cs =
                geom::slab_cross_section(hit.mesh, geom::Slab{z_low, z_high, std::nullopt});
            for (auto& p : cs.polygons) pieces.push_back(std::move(p));
        } catch (const GeometryError& e) {
            grid.warnings.push_back("element " + hit.node + ": " + e.what());
        }
    }
    std::vector<geom::PolygonWithHoles> footprint = geom::union_polygons(pieces);

    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    if (footprint.empty()) {
        grid.warnings.push_back("no element footprints in the slab; map is all free");
    } else {
        xmin = ymin = 1e300;
        xmax = ymax = -1e300;
        for (const auto& p : footprint)
            for (const auto& v : p.outer) {
                xmin = std::min(xmin, v.x());
                xmax = std::max(xmax, v.x());
                ymin = std::min(ymin, v.y());
                ymax = std::max(ymax, v.y());
            }
    }

    // snap the origin to the resolution lattice so equal content yields equal grids
    grid.origin_x = std::floor((xmin - spec.margin) / spec.resolution) * spec.resolution;
    grid.origin_y = std::floor((ymin - spec.margin) / spec.resolution) * spec.resolution;
    grid.width = std::max(
        1, static_cast<int>(std::ceil((xmax + spec.margin - grid.origin_x) / spec.resolution)));
    grid.height = std::max(
        1, static_cast<int>(std::ceil((ymax + spec.margin - grid.origin_y) / spec.resolution)));

    grid.cells.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);
    if (footprint.empty()) return grid;

    for (int iy = 0; iy < grid.height; ++iy)
        for (int ix = 0; ix < grid.width; ++ix)
            if (geom::point_in_polygons(footprint,
                                        geom::Vec2(grid.center_x(ix), grid.center_y(iy))))
                grid.set_occupied(ix, iy);
    return grid;
}

} // namespace

OccupancyGrid gen_localization_map(const wm::Graph& graph, const MapSpec& spec) {
    double center = spec.z_floor + spec.height;
    double half = spec.lidar_slab_thickness / 2;
    if (half < 0) throw Error("slab thickness must be non-negative");
    return rasterize(graph, spec, center - half, center + half);
}

OccupancyGrid gen_navigation_map(const wm::Graph& graph, const MapSpec& spec) {
    double z_low = spec.z_floor + spec.floor_clearance;
    double z_high = spec.z_floor + spec.height;
    if (z_low > z_high) throw Error("navigation height must be at least the floor clearance");
    return rasterize(graph, spec, z_low, z_high);
}

} // namespace bim2map::mapgen
