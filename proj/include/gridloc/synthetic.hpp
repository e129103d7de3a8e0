#pragma once

#include "gridloc/dihedral.hpp"
#include "gridloc/geo.hpp"
#include "gridloc/grid.hpp"
#include "gridloc/ingest.hpp"
#include "gridloc/polygon.hpp"

#include <cstdint>
#include <vector>

namespace gridloc {

/// Parameters of a generated coastline world and the mobility data observed on it.
struct SyntheticConfig {
    std::uint64_t seed = 1;
    double north = 35.6;  ///< background bbox northwest corner
    double west = 136.0;
    double background_width_m = 160000;
    double background_height_m = 180000;
    double pixel_size_m = 500;
    int grid_cells = 200;  ///< square data grid
    /// Background stretch that maps the map's meters onto data cells: a data
    /// cell spans pixel_size_m / stretch map meters along each axis.
    double stretch_x = 1.1;
    double stretch_y = 0.9;
    std::size_t pings = 100000;
    double land_density_ratio = 50;
    int users = 2000;
    int islands = 8;
    bool random_dihedral = true;
    /// Adds administrative regions, census counts and night-time home users.
    bool with_regions = false;
    int region_cols = 4;
    int region_rows = 3;
    double persons_per_home_user = 1000;
};

struct SyntheticWorld {
    SyntheticConfig config;
    std::vector<NamedPolygon> land;
    BBox bbox;
    ProjectionRef ref;
    /// Ground truth; `truth.axes` maps data indices to geographic orientation.
    GridSpec truth;
    /// Transform the publisher applied to the geographic raster (inverse of truth.axes).
    Dihedral data_transform = Dihedral::identity;
    std::vector<PingRecord> pings;  ///< data index convention
    std::vector<NamedPolygon> regions;
    std::vector<CensusRow> census;
};

SyntheticWorld generate_world(const SyntheticConfig& config);

/// Anchor displacement (east, south) in projected meters of `recovered`
/// relative to `truth`, measured in `ref`.
Eigen::Vector2d anchor_error_m(const GridSpec& recovered, const GridSpec& truth, const ProjectionRef& ref);

}  // namespace gridloc
