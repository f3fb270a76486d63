#include "bim2map/map_gen.hpp"

#include "bim2map/errors.hpp"
#include "bim2map/numfmt.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace bim2map::mapgen {

namespace {

std::string file_part(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string dir_part(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

std::string yaml_line(std::istream& in, const std::string& key, const std::string& path) {
    std::string line;
    while (std::getline(in, line)) {
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        if (line.substr(0, colon) != key) continue;
        auto value = line.substr(colon + 1);
        auto b = value.find_first_not_of(" \t");
        auto e = value.find_last_not_of(" \t\r");
        if (b == std::string::npos) return "";
        return value.substr(b, e - b + 1);
    }
    throw IoError(path + ": missing '" + key + "' entry");
}

double yaml_number(std::istream& in, const std::string& key, const std::string& path) {
    double value;
    if (!parse_double(yaml_line(in, key, path), value))
        throw IoError(path + ": bad number for '" + key + "'");
    return value;
}

int pgm_header_int(std::istream& in, const std::string& path) {
    // skip whitespace and '#' comment lines between header fields
    int c;
    while ((c = in.peek()) != EOF) {
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value;
    if (!(in >> value)) throw IoError(path + ": malformed header");
    return value;
}

} // namespace

void write_grid(const OccupancyGrid& grid, const std::string& basename) {
    const std::string pgm_path = basename + ".pgm";
    const std::string yaml_path = basename + ".yaml";

    std::ofstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw IoError("cannot write " + pgm_path);
    pgm << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    std::string row(static_cast<std::size_t>(grid.width), '\0');
    for (int iy = grid.height - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < grid.width; ++ix)
            row[static_cast<std::size_t>(ix)] = grid.occupied(ix, iy) ? '\x00' : '\xfe';
        pgm.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    pgm.close();
    if (!pgm) throw IoError("cannot write " + pgm_path);

    std::ofstream yaml(yaml_path, std::ios::binary);
    if (!yaml) throw IoError("cannot write " + yaml_path);
    yaml << "image: " << file_part(pgm_path) << "\n";
    yaml << "resolution: " << format_double(grid.resolution) << "\n";
    yaml << "origin: [" << format_double(grid.origin_x) << ", " << format_double(grid.origin_y)
         << ", 0.0]\n";
    yaml << "negate: 0\n";
    yaml << "occupied_thresh: 0.65\n";
    yaml << "free_thresh: 0.196\n";
    yaml.close();
    if (!yaml) throw IoError("cannot write " + yaml_path);
}

OccupancyGrid read_grid(const std::string& basename) {
    const std::string yaml_path = basename + ".yaml";
    std::ifstream yaml(yaml_path, std::ios::binary);
    if (!yaml) throw IoError("cannot open " + yaml_path);

    OccupancyGrid grid;
    const std::string image = yaml_line(yaml, "image", yaml_path);
    if (image.empty()) throw IoError(yaml_path + ": empty 'image' entry");
    grid.resolution = yaml_number(yaml, "resolution", yaml_path);
    if (!(grid.resolution > 0)) throw IoError(yaml_path + ": resolution must be positive");
    std::string origin = yaml_line(yaml, "origin", yaml_path);
    if (origin.size() < 2 || origin.front() != '[' || origin.back() != ']')
        throw IoError(yaml_path + ": origin must be a [x, y, yaw] list");
    origin = origin.substr(1, origin.size() - 2);
    std::replace(origin.begin(), origin.end(), ',', ' ');
    std::istringstream olist(origin);
    std::string ox, oy;
    if (!(olist >> ox >> oy)) throw IoError(yaml_path + ": origin must list x and y");
    if (!parse_double(ox, grid.origin_x) || !parse_double(oy, grid.origin_y))
        throw IoError(yaml_path + ": bad origin coordinate");

    const std::string pgm_path = dir_part(yaml_path) + image;
    std::ifstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw IoError("cannot open " + pgm_path);
    char m0 = 0, m1 = 0;
    pgm.get(m0);
    pgm.get(m1);
    if (m0 != 'P' || m1 != '5') throw IoError(pgm_path + ": not a binary PGM (P5) file");
    grid.width = pgm_header_int(pgm, pgm_path);
    grid.height = pgm_header_int(pgm, pgm_path);
    const int maxval = pgm_header_int(pgm, pgm_path);
    if (grid.width <= 0 || grid.height <= 0) throw IoError(pgm_path + ": bad dimensions");
    if (maxval != 255) throw IoError(pgm_path + ": unsupported maxval " + std::to_string(maxval));
    pgm.get(); // single whitespace byte after maxval

    std::vector<char> raster(static_cast<std::size_t>(grid.width) * grid.height);
    pgm.read(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (pgm.gcount() != static_cast<std::streamsize>(raster.size()))
        throw IoError(pgm_path + ": truncated raster");

    grid.cells.assign(raster.size(), 0);
    for (int iy = 0; iy < grid.height; ++iy) {
        const int file_row = grid.height - 1 - iy; // top row first in the file
        for (int ix = 0; ix < grid.width; ++ix) {
            const auto v = static_cast<std::uint8_t>(
                raster[static_cast<std::size_t>(file_row) * grid.width + ix]);
            if ((255 - v) / 255.0 > 0.65) grid.set_occupied(ix, iy);
        }
    }
    return grid;
}

} // namespace bim2map::mapgen
