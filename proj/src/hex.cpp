#include "gridloc/hex.hpp"

#include "gridloc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace gridloc {

HexCoord cube_round(double q, double r, double s) {
    double rq = std::round(q), rr = std::round(r), rs = std::round(s);
    const double dq = std::abs(rq - q), dr = std::abs(rr - r), ds = std::abs(rs - s);
    if (dq > dr && dq > ds)
        rq = -rr - rs;
    else if (dr > ds)
        rr = -rq - rs;
    return {static_cast<int>(rq), static_cast<int>(rr)};
}

HexCoord hex_of_point(const Eigen::Vector2d& xy, double edge_m) {
    const double q = (std::numbers::sqrt3 / 3.0 * xy.x() - 1.0 / 3.0 * xy.y()) / edge_m;
    const double r = (2.0 / 3.0 * xy.y()) / edge_m;
    return cube_round(q, r, -q - r);
}

Eigen::Vector2d hex_center(HexCoord h, double edge_m) {
    return {edge_m * std::numbers::sqrt3 * (h.q + 0.5 * h.r), edge_m * 1.5 * h.r};
}

std::array<Eigen::Vector2d, 6> hex_corners(HexCoord h, double edge_m) {
    const Eigen::Vector2d c = hex_center(h, edge_m);
    std::array<Eigen::Vector2d, 6> out;
    for (int i = 0; i < 6; ++i) {
        const double a = std::numbers::pi / 180.0 * (30.0 + 60.0 * i);
        out[i] = c + edge_m * Eigen::Vector2d(std::cos(a), std::sin(a));
    }
    return out;
}

double hex_edge_for_area(double area_km2) {
    if (!(area_km2 > 0)) throw Error("hexagon area must be positive");
    return std::sqrt(2.0 * area_km2 * 1e6 / (3.0 * std::numbers::sqrt3));
}

HexCounts hex_aggregate(std::span<const ProjectedPing> pings, const HexSpec& hex, CountMode mode) {
    if (!(hex.edge_m > 0)) throw Error("hexagon edge must be positive");
    HexCounts counts;
    if (mode == CountMode::records) {
        for (const ProjectedPing& p : pings) ++counts[hex_of_point(p.xy, hex.edge_m)];
        return counts;
    }
    std::vector<std::pair<HexCoord, std::int64_t>> pairs;
    pairs.reserve(pings.size());
    for (const ProjectedPing& p : pings) pairs.emplace_back(hex_of_point(p.xy, hex.edge_m), p.uid);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (const auto& [h, uid] : pairs) ++counts[h];
    return counts;
}

BinaryImage hex_rasterize(const HexCounts& counts, const HexSpec& hex, const BBox& bbox,
                          double pixel_size_m, std::int64_t min_count) {
    if (!(hex.edge_m > 0)) throw Error("hexagon edge must be positive");
    const Eigen::Vector2i dims = mask_dimensions(bbox, pixel_size_m, hex.origin);
    const Eigen::Vector2d nw = project(bbox.north, bbox.west, hex.origin);
    BinaryImage out = BinaryImage::Zero(dims.y(), dims.x());
    if (counts.empty()) return out;
    for (int y = 0; y < dims.y(); ++y) {
        for (int x = 0; x < dims.x(); ++x) {
            const Eigen::Vector2d center = nw + pixel_size_m * Eigen::Vector2d(x + 0.5, y + 0.5);
            auto it = counts.find(hex_of_point(center, hex.edge_m));
            out(y, x) = it != counts.end() && it->second >= min_count;
        }
    }
    return out;
}

}  // namespace gridloc
