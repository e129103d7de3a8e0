#include "gridloc/error.hpp"
#include "gridloc/georef.hpp"
#include "gridloc/json_io.hpp"
#include "gridloc/synthetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gridloc;

namespace {

const BBox kBox{136.0, 35.0, 136.5, 35.4};

TransformedMatch match_at(int ox, int oy, double sx = 1, double sy = 1, Dihedral d = Dihedral::identity) {
    const Eigen::Vector2i dims = mask_dimensions(kBox, 500, projection_for(kBox));
    TransformedMatch m;
    m.match = {ox, oy, 1.0};
    m.dihedral = d;
    m.scale_x = sx;
    m.scale_y = sy;
    m.template_width = 20;
    m.template_height = 10;
    m.background_width = dims.x();
    m.background_height = dims.y();
    return m;
}

GridSpec small_spec(int w, int h) {
    GridSpec s;
    s.anchor_lat = 35.0;
    s.anchor_lon = 136.0;
    s.ref_lat = 35.0;
    s.width_cells = w;
    s.height_cells = h;
    return s;
}

}  // namespace

TEST(AnchorFromMatch, ZeroOffsetIsBboxCorner) {
    const ProjectionRef ref = projection_for(kBox);
    const GridSpec s = anchor_from_match(match_at(0, 0), kBox, 500, ref);
    EXPECT_NEAR(s.anchor_lat, kBox.north, 1e-12);
    EXPECT_NEAR(s.anchor_lon, kBox.west, 1e-12);
    EXPECT_EQ(s.width_cells, 20);
    EXPECT_EQ(s.height_cells, 10);
    EXPECT_EQ(s.axes, Dihedral::identity);
}

TEST(AnchorFromMatch, OffsetInMeters) {
    const ProjectionRef ref = projection_for(kBox);
    const GridSpec s = anchor_from_match(match_at(10, 20), kBox, 500, ref);
    const Eigen::Vector2d m = project(s.anchor_lat, s.anchor_lon, ref);
    EXPECT_NEAR(m.x(), 5000, 1e-6);
    EXPECT_NEAR(m.y(), 10000, 1e-6);
}

TEST(AnchorFromMatch, ScaleIsUndone) {
    const ProjectionRef ref = projection_for(kBox);
    const GridSpec s = anchor_from_match(match_at(11, 9, 1.1, 0.9, Dihedral::rot90), kBox, 500, ref);
    const Eigen::Vector2d m = project(s.anchor_lat, s.anchor_lon, ref);
    EXPECT_NEAR(m.x(), 5000, 1e-6);
    EXPECT_NEAR(m.y(), 5000, 1e-6);
    EXPECT_DOUBLE_EQ(s.scale_x, 1.1);
    EXPECT_EQ(s.axes, Dihedral::rot90);
    EXPECT_EQ(data_width(s), 10);
}

TEST(AnchorFromMatch, DimsMismatch) {
    TransformedMatch m = match_at(0, 0);
    m.background_width += 1;
    EXPECT_THROW(anchor_from_match(m, kBox, 500, projection_for(kBox)), Error);
    m = match_at(1000, 0);
    EXPECT_THROW(anchor_from_match(m, kBox, 500, projection_for(kBox)), Error);
}

TEST(AnchorFromMatch, SyntheticRoundTrip) {
    SyntheticConfig cfg;
    cfg.seed = 5;
    cfg.pings = 60000;
    const SyntheticWorld w = generate_world(cfg);
    const ActivityRaster counts = accumulate(w.pings, 200, 200, CountMode::records);
    const LandMask bg = rasterize_polygons(w.land, w.bbox, cfg.pixel_size_m, w.ref);
    const TransformedMatch m = search_transforms(bg.bits, threshold(counts, 2));
    const GridSpec got = anchor_from_match(m, bg.bbox, bg.pixel_size_m, bg.ref);
    const Eigen::Vector2d err = anchor_error_m(got, w.truth, w.ref);
    const Eigen::Vector2d cell = cell_extent_m(w.truth);
    EXPECT_LE(std::abs(err.x()), cell.x());
    EXPECT_LE(std::abs(err.y()), cell.y());
    EXPECT_EQ(got.axes, w.truth.axes);
}

TEST(CellToGeo, FirstCellCentroid) {
    const GridSpec s = small_spec(3, 2);
    const Eigen::Vector2d ll = cell_to_geo(s, 0, 0);
    const Eigen::Vector2d m = project(ll.x(), ll.y(), grid_projection(s));
    EXPECT_NEAR(m.x(), 250, 1e-6);
    EXPECT_NEAR(m.y(), 250, 1e-6);
}

TEST(CellToGeo, RangeError) {
    const GridSpec s = small_spec(3, 2);
    EXPECT_THROW(cell_to_geo(s, 3, 0), Error);
    EXPECT_THROW(cell_to_geo(s, 0, -1), Error);
    EXPECT_NO_THROW(cell_to_geo(s, 2, 1));
}

TEST(GridGeoJson, OneCell) {
    GeoreferencedGrid g;
    g.spec = small_spec(1, 1);
    const auto j = grid_to_geojson(g);
    ASSERT_EQ(j["features"].size(), 1u);
    const auto& ring = j["features"][0]["geometry"]["coordinates"][0];
    EXPECT_EQ(ring.size(), 5u);
    EXPECT_EQ(ring[0], ring[4]);
}

TEST(GridGeoJson, FullGridConservesActivity) {
    oracle::Rng rng(151);
    GeoreferencedGrid g;
    g.spec = small_spec(200, 200);
    g.spec.axes = Dihedral::rot270;
    g.activity = oracle::random_counts(rng, 200, 200, 20);
    g.users = g.activity / 2;
    const auto j = grid_to_geojson(g);
    ASSERT_EQ(j["features"].size(), 40000u);
    std::int64_t total = 0;
    for (const auto& f : j["features"]) total += f["properties"]["activity"].get<std::int64_t>();
    EXPECT_EQ(total, g.activity.sum());
    EXPECT_EQ(j["provenance"]["grid_spec"]["axes"], "rot270");
}

TEST(GridGeoJson, AttributesFollowDataIndices) {
    GeoreferencedGrid g;
    g.spec = small_spec(4, 3);
    g.spec.axes = Dihedral::transpose;  // data is 3 wide, 4 tall
    g.activity = ActivityRaster::Zero(4, 3);
    g.activity(1, 2) = 7;
    g.users = g.activity;
    const auto j = grid_to_geojson(g);
    for (const auto& f : j["features"]) {
        const int x = f["properties"]["x"], y = f["properties"]["y"];
        EXPECT_EQ(f["properties"]["activity"].get<std::int64_t>(), g.activity(y, x));
        // The polygon centroid discretizes back to the same data cell.
        const auto& ring = f["geometry"]["coordinates"][0];
        const double lon = (ring[0][0].get<double>() + ring[2][0].get<double>()) / 2;
        const double lat = (ring[0][1].get<double>() + ring[2][1].get<double>()) / 2;
        const auto c = discretize(lat, lon, g.spec);
        ASSERT_TRUE(c);
        EXPECT_EQ(*c, (CellIndex{x, y}));
    }
    g.activity = ActivityRaster::Zero(3, 4);
    EXPECT_THROW(grid_to_geojson(g), Error);
}

TEST(GridGeoJson, SpecRoundTrip) {
    GeoreferencedGrid g;
    g.spec = small_spec(5, 4);
    g.spec.anchor_lat = 35.123;
    g.spec.anchor_lon = 136.456;
    g.spec.scale_x = 1.1;
    const GridSpec back = grid_spec_from_geojson(grid_to_geojson(g));
    EXPECT_NEAR(back.anchor_lat, g.spec.anchor_lat, 1e-12);
    EXPECT_NEAR(back.anchor_lon, g.spec.anchor_lon, 1e-12);
    EXPECT_EQ(back.width_cells, 5);
    EXPECT_DOUBLE_EQ(back.scale_x, 1.1);
}

TEST(JsonIo, RoundTrips) {
    GridSpec s = small_spec(7, 9);
    s.axes = Dihedral::anti_transpose;
    s.scale_y = 0.9;
    const GridSpec s2 = nlohmann::json(s).get<GridSpec>();
    EXPECT_EQ(s2.axes, s.axes);
    EXPECT_EQ(s2.scale_y, s.scale_y);
    EXPECT_EQ(s2.height_cells, 9);

    const TransformedMatch m = match_at(3, 4, 1.05, 0.95, Dihedral::flip_h);
    const TransformedMatch m2 = nlohmann::json(m).get<TransformedMatch>();
    EXPECT_EQ(m2.match.offset_x, 3);
    EXPECT_EQ(m2.dihedral, Dihedral::flip_h);
    EXPECT_EQ(m2.scale_x, 1.05);
    EXPECT_EQ(m2.background_height, m.background_height);

    const BBox b = nlohmann::json(kBox).get<BBox>();
    EXPECT_EQ(b.east, kBox.east);
    EXPECT_THROW(nlohmann::json::array({1, 2}).get<BBox>(), Error);
}

TEST(HexGeoJson, OneFeaturePerHex) {
    HexSpec hex{500, ProjectionRef{35, 136, 35}};
    HexCounts counts{{{0, 0}, 3}, {{1, -1}, 1}};
    const auto j = hex_to_geojson(counts, hex);
    ASSERT_EQ(j["features"].size(), 2u);
    EXPECT_EQ(j["features"][0]["geometry"]["coordinates"][0].size(), 7u);
    EXPECT_EQ(j["features"][0]["properties"]["count"], 3);
}
