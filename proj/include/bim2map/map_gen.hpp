#pragma once

#include "bim2map/world_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bim2map::mapgen {

enum class MapKind { Localization, Navigation };

struct MapSpec {
    MapKind kind = MapKind::Localization;
    double height = 0.5;                // lidar height / robot height, meters
    double z_floor = 0.0;               // story base
    double lidar_slab_thickness = 0.01; // localization slab thickness
    double floor_clearance = 0.02;      // navigation cuboid lower offset
    double resolution = 0.05;           // meters per cell
    double margin = 0.5;                // padding around content bounds
    wm::ElementFilter filter;           // defaults to ALL
};

struct OccupancyGrid {
    int width = 0, height = 0; // cells
    double resolution = 0.05;
    double origin_x = 0.0, origin_y = 0.0; // world pose of lower-left corner, yaw 0
    std::vector<std::uint8_t> cells;       // row-major, row 0 at origin (south); 1=occupied
    std::vector<std::string> warnings;

    bool occupied(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * width + ix] != 0; }
    void set_occupied(int ix, int iy) { cells[static_cast<std::size_t>(iy) * width + ix] = 1; }
    double center_x(int ix) const { return origin_x + (ix + 0.5) * resolution; }
    double center_y(int iy) const { return origin_y + (iy + 0.5) * resolution; }
    std::size_t occupied_count() const;

    bool operator==(const OccupancyGrid& o) const {
        return width == o.width && height == o.height && resolution == o.resolution &&
               origin_x == o.origin_x && origin_y == o.origin_y && cells == o.cells;
    }
};

// Thin slab at z_floor + height (closed), footprints of filtered elements.
OccupancyGrid gen_localization_map(const wm::Graph& graph, const MapSpec& spec);
// Cuboid z in [z_floor + floor_clearance, z_floor + height].
OccupancyGrid gen_navigation_map(const wm::Graph& graph, const MapSpec& spec);

// basename.pgm (binary P5, occupied=0, free=254, top row first) and
// basename.yaml (image/resolution/origin/negate/occupied_thresh/free_thresh).
void write_grid(const OccupancyGrid& grid, const std::string& basename);
OccupancyGrid read_grid(const std::string& basename);

} // namespace bim2map::mapgen
