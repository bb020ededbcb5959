#pragma once

// File formats: occupancy dumps, PGM rasters, trajectory rows.
//
// Occupancy dump (bit-exact round-trip):
//   # torus=<l1>x...x<ld> t=<time>
//   x1,...,xd        one line per occupied site, ascending flat index
//
// Raster (d = 2 only): binary portable graymap, one byte per site, row-major
// (row y, column x), occupied = 0 (black), empty = 255.
//
// All floating-point text goes through format_g17 (17 significant digits) so
// artifacts regenerate byte-identically.

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dcp/configuration.hpp"
#include "dcp/errors.hpp"
#include "dcp/torus.hpp"

namespace dcp {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct OccupancyDump {
    std::vector<int> sides;
    double time = 0.0;
    std::vector<std::vector<int>> coordinates;  // one row per occupied site
};

inline void write_occupancy(std::ostream& os, const Configuration& config, double time) {
    const auto& geo = config.geometry();
    os << "# torus=" << geo.shape_string() << " t=" << format_g17(time) << "\n";
    for (Site s = 0; s < geo.num_sites(); ++s) {
        if (!config.occupied(s)) continue;
        const auto c = geo.coords_of(s);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) os << ',';
            os << c[i];
        }
        os << "\n";
    }
}

inline void write_occupancy(std::ostream& os, const OccupancyDump& dump) {
    os << "# torus=";
    for (std::size_t i = 0; i < dump.sides.size(); ++i) {
        if (i) os << 'x';
        os << dump.sides[i];
    }
    os << " t=" << format_g17(dump.time) << "\n";
    for (const auto& c : dump.coordinates) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) os << ',';
            os << c[i];
        }
        os << "\n";
    }
}

inline OccupancyDump read_occupancy(std::istream& is) {
    OccupancyDump dump;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# torus=", 0) != 0)
        throw DomainError("occupancy dump: missing '# torus=' header");
    const auto t_pos = line.find(" t=");
    if (t_pos == std::string::npos)
        throw DomainError("occupancy dump: missing ' t=' in header");
    {
        std::string shape = line.substr(8, t_pos - 8);
        std::stringstream ss(shape);
        std::string part;
        while (std::getline(ss, part, 'x')) dump.sides.push_back(std::stoi(part));
        dump.time = std::stod(line.substr(t_pos + 3));
    }
    if (dump.sides.empty()) throw DomainError("occupancy dump: empty shape");
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<int> c;
        std::stringstream ss(line);
        std::string part;
        while (std::getline(ss, part, ',')) c.push_back(std::stoi(part));
        if (c.size() != dump.sides.size())
            throw DomainError("occupancy dump: coordinate dimension mismatch");
        dump.coordinates.push_back(std::move(c));
    }
    return dump;
}

// Raster of a d = 2 configuration; extra_comments are emitted as PGM '#'
// comment lines between the magic and the dimensions.
inline void write_pgm(std::ostream& os, const Configuration& config,
                      const std::vector<std::string>& extra_comments = {}) {
    const auto& geo = config.geometry();
    if (geo.dim() != 2) throw UnsupportedError("raster output requires d = 2");
    const int w = geo.sides()[0];
    const int h = geo.sides()[1];
    os << "P5\n";
    for (const auto& c : extra_comments) os << "# " << c << "\n";
    os << w << " " << h << "\n255\n";
    std::vector<int> coords(2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            coords[0] = x;
            coords[1] = y;
            const char pixel = config.occupied(geo.site_of(coords)) ? '\0' : '\xff';
            os.put(pixel);
        }
    }
}

}  // namespace dcp
