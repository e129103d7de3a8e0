#pragma once

#include "gridloc/geo.hpp"
#include "gridloc/grid.hpp"
#include "gridloc/hex.hpp"
#include "gridloc/match.hpp"

#include <nlohmann/json.hpp>

#include <optional>

namespace gridloc {

/// A located grid with per-cell attributes. Attribute rasters stay in the
/// data's own index convention; `spec.axes` maps them onto the map.
struct GeoreferencedGrid {
    GridSpec spec;
    ActivityRaster activity;
    ActivityRaster users;
    std::optional<ActivityRaster> homes;
    std::optional<TransformedMatch> match;
    std::optional<BBox> background_bbox;
    double pixel_size_m = 0;
};

/// Undoes the background scaling on the match offset, converts it to meters
/// at `pixel_size_m` and unprojects it to the grid's northwest anchor.
/// Throws Error when the match dimensions disagree with the bbox raster.
GridSpec anchor_from_match(const TransformedMatch& match, const BBox& background_bbox,
                           double pixel_size_m, const ProjectionRef& ref);

/// Centroid (lat, lon) of a cell given in data indices.
Eigen::Vector2d cell_to_geo(const GridSpec& spec, int x, int y);

/// Closed ring (lon, lat) of a geographic cell, counterclockwise from the northwest corner.
Ring cell_ring(const GridSpec& spec, CellIndex geo);

/// Geographic bounding box of the whole grid.
BBox grid_bbox(const GridSpec& spec);

/// One Polygon feature per cell, geographic row-major, with properties
/// x, y (data indices), activity, users and optionally homes. The grid spec
/// and match provenance ride along under the "provenance" member.
nlohmann::json grid_to_geojson(const GeoreferencedGrid& grid);

/// Rebuilds the GridSpec from an emitted collection; the anchor is recomputed
/// from the first feature's geometry.
GridSpec grid_spec_from_geojson(const nlohmann::json& collection);

/// One Polygon feature per hexagon with properties q, r, count.
nlohmann::json hex_to_geojson(const HexCounts& counts, const HexSpec& hex);

}  // namespace gridloc
