#include "gridloc/error.hpp"
#include "gridloc/hex.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gridloc;

namespace {

double hex_area_m2(double edge) {
    // Shoelace over the emitted corners.
    const auto c = hex_corners({0, 0}, edge);
    double a = 0;
    for (int i = 0; i < 6; ++i) a += c[i].x() * c[(i + 1) % 6].y() - c[(i + 1) % 6].x() * c[i].y();
    return std::abs(a) / 2;
}

}  // namespace

TEST(Hex, OriginAndNeighbour) {
    EXPECT_EQ(hex_of_point({0, 0}, 100), (HexCoord{0, 0}));
    EXPECT_EQ(hex_of_point({std::sqrt(3.0) * 100, 0}, 100), (HexCoord{1, 0}));
    EXPECT_EQ(hex_of_point({std::sqrt(3.0) * 50, 150}, 100), (HexCoord{0, 1}));
}

TEST(Hex, EdgeForArea) {
    EXPECT_NEAR(hex_edge_for_area(3 * std::sqrt(3.0) / 2 * 1e-6), 1.0, 1e-12);
    EXPECT_NEAR(hex_edge_for_area(0.7373), 532.7, 0.05);
    EXPECT_NEAR(hex_edge_for_area(36.129), 3729, 0.5);
    EXPECT_NEAR(hex_edge_for_area(0.1053), 201.3, 0.05);
    EXPECT_THROW(hex_edge_for_area(0), Error);
    EXPECT_THROW(hex_edge_for_area(-1), Error);
}

TEST(Hex, AreaIdentity) {
    oracle::Rng rng(61);
    for (int i = 0; i < 100; ++i) {
        const double area_km2 = std::pow(10.0, rng.real(-4, 3));
        const double edge = hex_edge_for_area(area_km2);
        EXPECT_LE(std::abs(hex_area_m2(edge) - area_km2 * 1e6) / (area_km2 * 1e6), 1e-9);
    }
}

TEST(Hex, CubeRoundStaysOnPlane) {
    oracle::Rng rng(67);
    for (int i = 0; i < 1000; ++i) {
        const double q = rng.real(-50, 50), r = rng.real(-50, 50);
        const HexCoord h = cube_round(q, r, -q - r);
        EXPECT_EQ(h.q + h.r + h.s(), 0);
        EXPECT_LE(std::abs(h.q - q) + std::abs(h.r - r) + std::abs(h.s() - (-q - r)), 2.0 + 1e-9);
    }
}

TEST(Hex, AssignmentAgreesWithGeometry) {
    oracle::Rng rng(71);
    const double edge = 250;
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Vector2d p(rng.real(-5000, 5000), rng.real(-5000, 5000));
        const HexCoord h = hex_of_point(p, edge);
        const int side = oracle::hexagon_side(hex_center(h, edge), edge, p);
        if (side == 0) continue;
        ++checked;
        EXPECT_EQ(side, 1) << p.transpose();
        // No neighbour claims the point as well.
        for (auto [dq, dr] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}})
            EXPECT_EQ(oracle::hexagon_side(hex_center({h.q + dq, h.r + dr}, edge), edge, p), -1);
    }
    EXPECT_GT(checked, 990);
}

TEST(Hex, CornersAreEdgeApart) {
    const auto c = hex_corners({3, -2}, 40);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR((c[i] - c[(i + 1) % 6]).norm(), 40, 1e-9);
}

TEST(Hex, AggregateModes) {
    const std::vector<ProjectedPing> p{{1, {0, 0}}, {1, {1, 1}}, {2, {0, 0}}, {2, {1000, 0}}};
    const HexSpec spec{100, {}};
    const HexCounts rec = hex_aggregate(p, spec, CountMode::records);
    const HexCounts usr = hex_aggregate(p, spec, CountMode::unique_users);
    EXPECT_EQ(rec.at({0, 0}), 3);
    EXPECT_EQ(usr.at({0, 0}), 2);
    std::int64_t total = 0;
    for (const auto& [h, n] : rec) total += n;
    EXPECT_EQ(total, 4);
}

TEST(Hex, RasterizeSingleHex) {
    const BBox bbox{135.99, 34.99, 136.01, 35.01};
    HexSpec spec{300, ProjectionRef{35.0, 136.0, 35.0}};
    HexCounts counts{{{0, 0}, 5}};
    const BinaryImage img = hex_rasterize(counts, spec, bbox, 50);
    const Eigen::Vector2d nw = project(bbox.north, bbox.west, spec.origin);
    for (int y = 0; y < img.rows(); ++y) {
        for (int x = 0; x < img.cols(); ++x) {
            const Eigen::Vector2d c = nw + 50 * Eigen::Vector2d(x + 0.5, y + 0.5);
            const int side = oracle::hexagon_side({0, 0}, 300, c, 1e-6);
            if (side != 0) EXPECT_EQ(img(y, x), side == 1);
        }
    }
    EXPECT_GT(img.count(), 0);
    EXPECT_FALSE(hex_rasterize({}, spec, bbox, 50).any());
    EXPECT_FALSE(hex_rasterize(counts, spec, bbox, 50, 6).any());
}
