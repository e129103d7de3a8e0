#include "gridloc/geo.hpp"

#include "gridloc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridloc {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Slack for bbox extents that are exact multiples of the pixel size.
constexpr double kExtentSlack = 1e-9;

std::vector<Eigen::Vector2d> project_ring(const Ring& ring, const ProjectionRef& ref) {
    std::vector<Eigen::Vector2d> out;
    out.reserve(ring.size());
    for (const auto& p : ring) out.push_back(project(p.y(), p.x(), ref));
    return out;
}

// Sutherland-Hodgman clip of a closed ring against one half-plane.
template <typename Inside, typename Cross>
std::vector<Eigen::Vector2d> clip_half(const std::vector<Eigen::Vector2d>& in, Inside inside,
                                       Cross cross) {
    std::vector<Eigen::Vector2d> out;
    if (in.empty()) return out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Eigen::Vector2d& cur = in[i];
        const Eigen::Vector2d& prev = in[(i + in.size() - 1) % in.size()];
        const bool ci = inside(cur), pi = inside(prev);
        if (ci) {
            if (!pi) out.push_back(cross(prev, cur));
            out.push_back(cur);
        } else if (pi) {
            out.push_back(cross(prev, cur));
        }
    }
    return out;
}

double open_polygon_area(const std::vector<Eigen::Vector2d>& pts) {
    double twice = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * std::abs(twice);
}

double clipped_area(const Ring& ring, const ProjectionRef& ref, const Eigen::Vector2d& lo,
                    const Eigen::Vector2d& hi) {
    std::vector<Eigen::Vector2d> pts = project_ring(ring, ref);
    pts.pop_back();  // drop closing duplicate
    for (int axis = 0; axis < 2; ++axis) {
        auto cross_at = [axis](double v) {
            return [axis, v](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                const double t = (v - a[axis]) / (b[axis] - a[axis]);
                return Eigen::Vector2d(a + t * (b - a));
            };
        };
        const double l = lo[axis], h = hi[axis];
        pts = clip_half(pts, [axis, l](const Eigen::Vector2d& p) { return p[axis] >= l; }, cross_at(l));
        pts = clip_half(pts, [axis, h](const Eigen::Vector2d& p) { return p[axis] <= h; }, cross_at(h));
    }
    return pts.size() < 3 ? 0.0 : open_polygon_area(pts);
}

}  // namespace

ProjectionRef projection_for(const BBox& bbox) {
    return ProjectionRef{bbox.north, bbox.west, bbox.center_lat(), kEarthRadiusM};
}

Eigen::Vector2d project(double lat, double lon, const ProjectionRef& ref) {
    const double k = kDegToRad * ref.earth_radius_m;
    return {(lon - ref.origin_lon) * k * std::cos(ref.ref_lat * kDegToRad),
            (ref.origin_lat - lat) * k};
}

Eigen::Vector2d unproject(const Eigen::Vector2d& es, const ProjectionRef& ref) {
    const double k = kDegToRad * ref.earth_radius_m;
    return {ref.origin_lat - es.y() / k,
            ref.origin_lon + es.x() / (k * std::cos(ref.ref_lat * kDegToRad))};
}

Eigen::Vector2i mask_dimensions(const BBox& bbox, double pixel_size_m, const ProjectionRef& ref) {
    if (!(pixel_size_m > 0)) throw Error("pixel_size_m must be positive");
    if (!(bbox.east > bbox.west) || !(bbox.north > bbox.south)) throw Error("degenerate bounding box");
    const Eigen::Vector2d nw = project(bbox.north, bbox.west, ref);
    const Eigen::Vector2d se = project(bbox.south, bbox.east, ref);
    const Eigen::Vector2d extent = (se - nw) / pixel_size_m;
    return {std::max(1, static_cast<int>(std::ceil(extent.x() - kExtentSlack))),
            std::max(1, static_cast<int>(std::ceil(extent.y() - kExtentSlack)))};
}

LandMask rasterize_polygons(std::span<const NamedPolygon> polygons, const BBox& bbox,
                            double pixel_size_m, const ProjectionRef& ref) {
    const Eigen::Vector2i dims = mask_dimensions(bbox, pixel_size_m, ref);
    LandMask mask{BinaryImage::Zero(dims.y(), dims.x()), bbox, pixel_size_m, ref};
    const Eigen::Vector2d nw = project(bbox.north, bbox.west, ref);

    // Edges in pixel units; pixel (x, y) has its center at (x + 0.5, y + 0.5).
    struct Edge {
        Eigen::Vector2d a, b;
    };
    std::vector<double> crossings;
    for (const NamedPolygon& poly : polygons) {
        for (const PolygonPart& part : poly.parts) {
            std::vector<Edge> edges;
            double ymin = INFINITY, ymax = -INFINITY;
            for (const Ring& ring : part) {
                auto pts = project_ring(ring, ref);
                for (auto& p : pts) {
                    p = (p - nw) / pixel_size_m;
                    ymin = std::min(ymin, p.y());
                    ymax = std::max(ymax, p.y());
                }
                for (std::size_t i = 0; i + 1 < pts.size(); ++i) edges.push_back({pts[i], pts[i + 1]});
            }
            const int row_lo = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
            const int row_hi = std::min(dims.y() - 1, static_cast<int>(std::ceil(ymax - 0.5)));
            for (int row = row_lo; row <= row_hi; ++row) {
                const double cy = row + 0.5;
                crossings.clear();
                for (const Edge& e : edges) {
                    if ((e.a.y() > cy) == (e.b.y() > cy)) continue;
                    crossings.push_back(e.a.x() + (cy - e.a.y()) * (e.b.x() - e.a.x()) / (e.b.y() - e.a.y()));
                }
                std::sort(crossings.begin(), crossings.end());
                // Center cx is inside iff an odd number of crossings lie strictly
                // right of it, i.e. cx in [x_2k, x_2k+1).
                for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
                    const int x0 = std::max(0, static_cast<int>(std::ceil(crossings[k] - 0.5)));
                    int x1 = static_cast<int>(std::ceil(crossings[k + 1] - 0.5)) - 1;
                    x1 = std::min(x1, dims.x() - 1);
                    if (x1 >= x0) mask.bits.row(row).segment(x0, x1 - x0 + 1).setConstant(true);
                }
            }
        }
    }
    return mask;
}

LandMask rasterize_polygons(std::span<const NamedPolygon> polygons, const BBox& bbox,
                            double pixel_size_m) {
    return rasterize_polygons(polygons, bbox, pixel_size_m, projection_for(bbox));
}

bool point_in_polygon(const Eigen::Vector2d& lon_lat, const NamedPolygon& polygon) {
    return std::any_of(polygon.parts.begin(), polygon.parts.end(),
                       [&](const PolygonPart& part) { return part_contains(part, lon_lat); });
}

double projected_area(const NamedPolygon& polygon, const ProjectionRef& ref) {
    double area = 0;
    for (const PolygonPart& part : polygon.parts) {
        for (std::size_t i = 0; i < part.size(); ++i) {
            auto pts = project_ring(part[i], ref);
            pts.pop_back();
            const double a = open_polygon_area(pts);
            area += i == 0 ? a : -a;
        }
    }
    return area;
}

double coverage_fraction(const NamedPolygon& polygon, const BBox& bbox, const ProjectionRef& ref) {
    const double total = projected_area(polygon, ref);
    if (!(total > 0)) throw Error("polygon '" + polygon.name + "' has zero area");
    const Eigen::Vector2d nw = project(bbox.north, bbox.west, ref);
    const Eigen::Vector2d se = project(bbox.south, bbox.east, ref);
    const Eigen::Vector2d lo = nw.cwiseMin(se), hi = nw.cwiseMax(se);
    double inside = 0;
    for (const PolygonPart& part : polygon.parts) {
        for (std::size_t i = 0; i < part.size(); ++i) {
            const double a = clipped_area(part[i], ref, lo, hi);
            inside += i == 0 ? a : -a;
        }
    }
    return std::clamp(inside / total, 0.0, 1.0);
}

}  // namespace gridloc
