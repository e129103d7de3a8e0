#pragma once

#include "gridloc/geo.hpp"
#include "gridloc/raster.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <map>
#include <span>

namespace gridloc {

/// Pointy-top hexagons of edge `edge_m` tiling the plane of `origin`, with
/// hex (0, 0) centered on the projection origin.
struct HexSpec {
    double edge_m = 0;
    ProjectionRef origin;
};

/// Axial hex coordinate; the implied cube coordinate is (q, r, -q - r).
struct HexCoord {
    int q = 0;
    int r = 0;

    int s() const { return -q - r; }
    friend auto operator<=>(const HexCoord&, const HexCoord&) = default;
};

using HexCounts = std::map<HexCoord, std::int64_t>;

/// A ping already projected to (east_m, south_m).
struct ProjectedPing {
    std::int64_t uid = 0;
    Eigen::Vector2d xy = Eigen::Vector2d::Zero();
};

/// Rounds fractional cube coordinates to the nearest hex, fixing the
/// component with the largest rounding error so q + r + s = 0.
HexCoord cube_round(double q, double r, double s);

HexCoord hex_of_point(const Eigen::Vector2d& xy, double edge_m);
Eigen::Vector2d hex_center(HexCoord h, double edge_m);
/// Corners counterclockwise in (east, south) coordinates, starting at 30 degrees.
std::array<Eigen::Vector2d, 6> hex_corners(HexCoord h, double edge_m);

/// Edge length (m) of the regular hexagon with the given area (km^2).
double hex_edge_for_area(double area_km2);

HexCounts hex_aggregate(std::span<const ProjectedPing> pings, const HexSpec& hex, CountMode mode);

/// Pixel grid over `bbox` at `pixel_size_m` in the hex spec's projection; a
/// pixel is set when the hexagon containing its center has count >= min_count.
BinaryImage hex_rasterize(const HexCounts& counts, const HexSpec& hex, const BBox& bbox,
                          double pixel_size_m, std::int64_t min_count = 1);

}  // namespace gridloc
