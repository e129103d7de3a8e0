#include "gridloc/georef.hpp"
#include "gridloc/synthetic.hpp"

#include <gtest/gtest.h>

using namespace gridloc;

TEST(Synthetic, SeedDeterminesWorld) {
    SyntheticConfig cfg;
    cfg.pings = 5000;
    cfg.seed = 3;
    const SyntheticWorld a = generate_world(cfg), b = generate_world(cfg);
    EXPECT_EQ(a.pings, b.pings);
    EXPECT_EQ(a.truth.anchor_lat, b.truth.anchor_lat);
    cfg.seed = 4;
    EXPECT_NE(generate_world(cfg).pings, a.pings);
}

TEST(Synthetic, TruthIsConsistent) {
    SyntheticConfig cfg;
    cfg.pings = 20000;
    cfg.with_regions = true;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        cfg.seed = seed;
        const SyntheticWorld w = generate_world(cfg);
        EXPECT_EQ(w.truth.axes, inverse(w.data_transform));
        EXPECT_GE(w.pings.size(), cfg.pings);
        for (const PingRecord& p : w.pings) {
            ASSERT_GE(p.cell_x, 0);
            ASSERT_LT(p.cell_x, 200);
            ASSERT_GE(p.cell_y, 0);
            ASSERT_LT(p.cell_y, 200);
        }
        EXPECT_EQ(w.regions.size(), 13u);
        EXPECT_EQ(w.census.size(), 13u);
        const BBox gb = grid_bbox(w.truth);
        EXPECT_GE(gb.west, w.bbox.west);
        EXPECT_LE(gb.east, w.bbox.east);
        EXPECT_GE(gb.south, w.bbox.south);
        EXPECT_LE(gb.north, w.bbox.north);
    }
}

TEST(Synthetic, LandIsDenser) {
    SyntheticConfig cfg;
    cfg.pings = 50000;
    cfg.random_dihedral = false;
    const SyntheticWorld w = generate_world(cfg);
    std::size_t on = 0;
    for (const PingRecord& p : w.pings) {
        const Eigen::Vector2d ll = cell_to_geo(w.truth, p.cell_x, p.cell_y);
        for (const NamedPolygon& poly : w.land) {
            if (point_in_polygon({ll.y(), ll.x()}, poly)) {
                ++on;
                break;
            }
        }
    }
    EXPECT_GT(double(on) / double(w.pings.size()), 0.9);
}
