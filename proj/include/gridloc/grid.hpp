#pragma once

#include "gridloc/dihedral.hpp"
#include "gridloc/error.hpp"
#include "gridloc/geo.hpp"
#include "gridloc/ingest.hpp"
#include "gridloc/raster.hpp"

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace gridloc {

/// A square-cell grid pinned to the map. The anchor is the outer northwest
/// corner of geographic cell (0, 0); geographic x grows east and y grows south.
///
/// `scale_x`/`scale_y` are the background stretch factors the grid was
/// recovered under: a cell spans cell_size_m / scale meters of the local
/// projection along each axis (1 for a grid defined directly in meters).
/// `axes` maps the data's own cell indices onto geographic orientation.
struct GridSpec {
    double anchor_lat = 0;
    double anchor_lon = 0;
    double cell_size_m = 500;
    int width_cells = 200;
    int height_cells = 200;
    double ref_lat = 0;
    double scale_x = 1;
    double scale_y = 1;
    Dihedral axes = Dihedral::identity;
};

/// Throws Error on a non-positive cell size, scale, or dimension.
void validate(const GridSpec& spec);

ProjectionRef grid_projection(const GridSpec& spec);

/// Projected meters covered by one cell along (east, south).
Eigen::Vector2d cell_extent_m(const GridSpec& spec);

/// Dimensions of rasters in the data's own index convention.
int data_width(const GridSpec& spec);
int data_height(const GridSpec& spec);

CellIndex data_to_geo(const GridSpec& spec, CellIndex data);
CellIndex geo_to_data(const GridSpec& spec, CellIndex geo);

/// Cell (data convention) containing the point, or nullopt outside the grid.
std::optional<CellIndex> discretize(double lat, double lon, const GridSpec& spec);
std::optional<CellIndex> discretize(const GeoPing& ping, const GridSpec& spec);

struct DiscretizedPings {
    std::vector<PingRecord> pings;
    std::vector<std::string> uids;  ///< interned uid i -> original id
    std::size_t out_of_bounds = 0;
};

/// Discretizes geographic pings onto the grid. Uids are interned in first-seen
/// order; day/slot come from the UTC timestamp, days counted from the
/// earliest ping's date.
DiscretizedPings discretize_pings(std::span<const GeoPing> pings, const GridSpec& spec);

/// Per-cell counts of pings (records) or of distinct uids (unique users).
ActivityRaster accumulate(std::span<const PingRecord> pings, int width, int height, CountMode mode);

/// Set where value >= t.
template <typename Derived>
BinaryImage threshold_at(const Eigen::ArrayBase<Derived>& raster, typename Derived::Scalar t) {
    return (raster >= t).eval();
}

/// Integer-count threshold; t = 0 sets every pixel.
BinaryImage threshold(const ActivityRaster& raster, std::int64_t t);

/// Any activity at all; same as threshold(raster, 1).
BinaryImage threshold_nonzero(const ActivityRaster& raster);

/// Threshold for real-valued (share) rasters.
BinaryImage threshold_real(const RealRaster& raster, double t);

/// Sums k x k blocks. Dimensions must be divisible by k.
template <typename Scalar>
Raster<Scalar> block_aggregate(const Raster<Scalar>& raster, int k) {
    if (k <= 0) throw Error("block size must be positive");
    if (raster.rows() % k != 0 || raster.cols() % k != 0) {
        throw Error("raster " + std::to_string(raster.cols()) + "x" + std::to_string(raster.rows()) +
                    " is not divisible by block size k=" + std::to_string(k));
    }
    Raster<Scalar> out(raster.rows() / k, raster.cols() / k);
    for (Eigen::Index y = 0; y < out.rows(); ++y) {
        for (Eigen::Index x = 0; x < out.cols(); ++x) out(y, x) = raster.block(y * k, x * k, k, k).sum();
    }
    return out;
}

/// log10(1 + count); display only.
RealRaster log_view(const ActivityRaster& raster);

/// Cell table CSV with header x,y,value; every cell written row-major.
void write_raster_csv(std::ostream& out, const RealRaster& raster);
void write_raster_csv(std::ostream& out, const ActivityRaster& raster);

/// Reads an x,y,value CSV. Dimensions come from `width`/`height` when given,
/// otherwise from the largest indices present. Missing cells are zero.
RealRaster read_raster_csv(std::istream& in, std::optional<int> width = std::nullopt,
                           std::optional<int> height = std::nullopt);

/// Integer view of read_raster_csv; throws ParseError on fractional or negative values.
ActivityRaster read_count_raster_csv(std::istream& in, std::optional<int> width = std::nullopt,
                                     std::optional<int> height = std::nullopt);

}  // namespace gridloc
