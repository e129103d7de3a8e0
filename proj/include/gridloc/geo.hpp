#pragma once

#include "gridloc/polygon.hpp"
#include "gridloc/raster.hpp"

#include <Eigen/Core>

#include <span>

namespace gridloc {

inline constexpr double kEarthRadiusM = 6371000.0;

/// Local equirectangular frame: east grows with longitude, south grows as
/// latitude decreases, both in meters from the origin.
struct ProjectionRef {
    double origin_lat = 0;
    double origin_lon = 0;
    double ref_lat = 0;  ///< latitude whose cosine scales the east axis
    double earth_radius_m = kEarthRadiusM;
};

/// Geographic bounding box in degrees.
struct BBox {
    double west = 0;
    double south = 0;
    double east = 0;
    double north = 0;

    Eigen::Vector2d northwest() const { return {west, north}; }  ///< (lon, lat)
    double center_lat() const { return 0.5 * (south + north); }
};

/// Projection anchored at the bbox northwest corner, ref_lat at the bbox center.
ProjectionRef projection_for(const BBox& bbox);

/// (lat, lon) degrees -> (east_m, south_m).
Eigen::Vector2d project(double lat, double lon, const ProjectionRef& ref);

/// (east_m, south_m) -> (lat, lon) degrees.
Eigen::Vector2d unproject(const Eigen::Vector2d& east_south, const ProjectionRef& ref);

/// Pixel grid covering a bbox at a fixed meter scale.
struct LandMask {
    BinaryImage bits;
    BBox bbox;
    double pixel_size_m = 0;
    ProjectionRef ref;
};

/// Pixel counts covering the projected bbox: ceil(extent / pixel_size_m), at least 1.
Eigen::Vector2i mask_dimensions(const BBox& bbox, double pixel_size_m, const ProjectionRef& ref);

/// Pixel is set iff its center lies in the union of the polygons; each part
/// fills by the even-odd rule so holes subtract. Rows are filled scanline by
/// scanline.
LandMask rasterize_polygons(std::span<const NamedPolygon> polygons, const BBox& bbox,
                            double pixel_size_m, const ProjectionRef& ref);

/// Convenience overload using projection_for(bbox).
LandMask rasterize_polygons(std::span<const NamedPolygon> polygons, const BBox& bbox,
                            double pixel_size_m);

/// Even-odd point test on (lon, lat); the polygon is the union of its parts.
bool point_in_polygon(const Eigen::Vector2d& lon_lat, const NamedPolygon& polygon);

/// Share of the polygon's projected area lying inside `bbox`, by exact
/// clipping against the projected bbox rectangle. Throws Error for zero area.
double coverage_fraction(const NamedPolygon& polygon, const BBox& bbox, const ProjectionRef& ref);

/// Area in square meters of the polygon on the projected plane.
double projected_area(const NamedPolygon& polygon, const ProjectionRef& ref);

}  // namespace gridloc
