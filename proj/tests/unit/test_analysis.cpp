#include "gridloc/analysis.hpp"
#include "gridloc/error.hpp"
#include "gridloc/georef.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace gridloc;

namespace {

PingRecord ping(std::int64_t uid, int slot, int x, int y) { return {uid, 0, slot, x, y}; }

std::vector<PingRecord> user_with_top4(std::int64_t uid, std::vector<CellIndex> cells) {
    std::vector<PingRecord> p;
    int n = 8;
    for (const CellIndex& c : cells) {
        for (int i = 0; i < n; ++i) p.push_back(ping(uid, 12, c.x, c.y));
        --n;
    }
    return p;
}

GridSpec spec_10() {
    GridSpec s;
    s.anchor_lat = 35.0;
    s.anchor_lon = 136.0;
    s.ref_lat = 35.0;
    s.width_cells = s.height_cells = 10;
    return s;
}

NamedPolygon lonlat_rect(const std::string& name, double w, double s, double e, double n) {
    NamedPolygon p{name, {{{{w, s}, {e, s}, {e, n}, {w, n}, {w, s}}}}};
    normalize_orientation(p);
    return p;
}

}  // namespace

TEST(NightWindow, DefaultBoundaries) {
    const NightWindow w = default_night_window();
    EXPECT_TRUE(w.test(42));
    EXPECT_TRUE(w.test(47));
    EXPECT_TRUE(w.test(0));
    EXPECT_TRUE(w.test(15));
    EXPECT_FALSE(w.test(16));
    EXPECT_FALSE(w.test(41));
    EXPECT_EQ(w.count(), 22u);
}

TEST(DetectHome, SingleNightCell) {
    std::vector<PingRecord> p;
    for (int i = 0; i < 10; ++i) p.push_back(ping(1, 44, 5, 5));
    for (int i = 0; i < 3; ++i) p.push_back(ping(1, 20, 2, 2));
    const auto h = detect_home(p);
    ASSERT_TRUE(h);
    EXPECT_EQ(h->cell, (CellIndex{5, 5}));
    EXPECT_EQ(h->night_pings, 10);
}

TEST(DetectHome, NoNightPings) {
    const std::vector<PingRecord> p{ping(1, 20, 1, 1), ping(1, 30, 1, 1)};
    EXPECT_FALSE(detect_home(p));
}

TEST(DetectHome, TieGoesToSmallerY) {
    std::vector<PingRecord> p;
    for (int i = 0; i < 4; ++i) {
        p.push_back(ping(1, 2, 3, 7));
        p.push_back(ping(1, 2, 3, 2));
    }
    EXPECT_EQ(detect_home(p)->cell, (CellIndex{3, 2}));
}

TEST(DetectHome, PermutationInvariant) {
    oracle::Rng rng(157);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<PingRecord> p;
        for (int i = 0; i < 40; ++i) p.push_back(ping(1, rng.integer(0, 47), rng.integer(0, 3), rng.integer(0, 3)));
        const auto a = detect_home(p);
        std::shuffle(p.begin(), p.end(), rng.engine());
        const auto b = detect_home(p);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_EQ(a->cell, b->cell);
    }
}

TEST(DetectHomes, OnePerUserAndThreadIndependent) {
    oracle::Rng rng(163);
    std::vector<PingRecord> p;
    for (int i = 0; i < 5000; ++i) p.push_back(ping(rng.integer(0, 300), rng.integer(0, 47), rng.integer(0, 9), rng.integer(0, 9)));
    const auto one = detect_homes(p, default_night_window(), 1);
    const auto four = detect_homes(p, default_night_window(), 4);
    ASSERT_EQ(one.size(), four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].uid, four[i].uid);
        EXPECT_EQ(one[i].cell, four[i].cell);
    }
    EXPECT_TRUE(std::is_sorted(one.begin(), one.end(), [](auto& a, auto& b) { return a.uid < b.uid; }));
}

TEST(Pearson, ClosedForms) {
    const std::vector<double> a{1, 2, 3}, b{2, 4, 6}, c{6, 4, 2};
    EXPECT_NEAR(pearson(a, b), 1.0, 1e-12);
    EXPECT_NEAR(pearson(a, c), -1.0, 1e-12);
    const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
    EXPECT_NEAR(pearson(x, y), 0.8, 1e-12);
}

TEST(Pearson, Errors) {
    const std::vector<double> a{1, 2, 3}, flat{5, 5, 5}, two{1, 2};
    EXPECT_THROW(pearson(a, flat), Error);
    EXPECT_THROW(pearson(a, two), Error);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST(Pearson, AffineInvariance) {
    oracle::Rng rng(167);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(20), y(20);
        for (int i = 0; i < 20; ++i) {
            x[i] = rng.real(-5, 5);
            y[i] = x[i] + rng.real(-3, 3);
        }
        const double r = pearson(x, y);
        const double a = rng.real(0.1, 10), b = rng.real(-100, 100);
        std::vector<double> xp(20), xn(20);
        for (int i = 0; i < 20; ++i) {
            xp[i] = a * x[i] + b;
            xn[i] = -a * x[i] + b;
        }
        EXPECT_NEAR(pearson(xp, y), r, 1e-12);
        EXPECT_NEAR(pearson(xn, y), -r, 1e-12);
        EXPECT_LE(std::abs(r), 1.0);
    }
}

TEST(TopLocations, RankAndTieRule) {
    std::vector<PingRecord> p;
    auto add = [&](int x, int n) {
        for (int i = 0; i < n; ++i) p.push_back(ping(1, 0, x, x));
    };
    add(4, 1);
    add(3, 1);
    add(2, 2);
    add(1, 3);
    add(0, 5);
    const auto top = top_locations(p);
    const std::vector<CellIndex> want{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    EXPECT_EQ(top, want);
}

TEST(TopLocations, SmallInputs) {
    const std::vector<PingRecord> one{ping(1, 0, 2, 3), ping(1, 5, 2, 3)};
    EXPECT_EQ(top_locations(one), (std::vector<CellIndex>{{2, 3}}));
    EXPECT_TRUE(top_locations({}).empty());
}

TEST(Coarsening, DistinctCells) {
    const std::vector<CellIndex> square{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    EXPECT_EQ(distinct_after_coarsening(square, 2), 1);
    const std::vector<CellIndex> spread{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
    EXPECT_EQ(distinct_after_coarsening(spread, 2), 4);
    EXPECT_EQ(distinct_after_coarsening(spread, 4), 1);
    EXPECT_THROW(distinct_after_coarsening(spread, 0), Error);
}

TEST(Identifiability, SingleUserColumns) {
    const auto p = user_with_top4(9, {{0, 0}, {2, 0}, {0, 2}, {2, 2}});
    const IdentifiabilityTable t = identifiability_table(p);
    EXPECT_EQ(t.ranked_users, 1);
    EXPECT_EQ(t.at(4, 0), 1);  // factor 2
    EXPECT_EQ(t.at(1, 1), 1);  // factor 4
    for (std::size_t j = 0; j < t.factors.size(); ++j) EXPECT_EQ(t.users.col(j).sum(), 1);

    const auto q = user_with_top4(3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    EXPECT_EQ(identifiability_table(q).at(1, 0), 1);
}

TEST(Identifiability, ExcludesSparseUsers) {
    std::vector<PingRecord> p = user_with_top4(1, {{0, 0}, {5, 5}, {9, 9}, {20, 20}});
    p.push_back(ping(2, 0, 1, 1));
    p.push_back(ping(2, 0, 3, 1));
    const IdentifiabilityTable t = identifiability_table(p);
    EXPECT_EQ(t.ranked_users, 1);
    EXPECT_EQ(t.excluded_users, 1);
}

TEST(Identifiability, MonotoneAndConstantColumns) {
    oracle::Rng rng(173);
    std::vector<PingRecord> p;
    for (int i = 0; i < 20000; ++i)
        p.push_back(ping(rng.integer(0, 400), rng.integer(0, 47), rng.integer(0, 199), rng.integer(0, 199)));
    const IdentifiabilityTable t = identifiability_table(p, {2, 4, 8, 16, 32}, 3);
    for (Eigen::Index j = 0; j < t.users.cols(); ++j) EXPECT_EQ(t.users.col(j).sum(), t.ranked_users);
    // Per user: d along the chain never increases.
    const UserPings users = group_by_user(p);
    for (std::size_t u = 0; u < users.users(); ++u) {
        const auto top = top_locations(users.user(u));
        if (top.size() < 4) continue;
        int prev = 4;
        for (int f : {2, 4, 8, 16, 32}) {
            const int d = distinct_after_coarsening(top, f);
            EXPECT_LE(d, prev);
            prev = d;
        }
    }
    const IdentifiabilityTable single = identifiability_table(p, {2, 4, 8, 16, 32}, 1);
    EXPECT_TRUE(single.users == t.users);
}

TEST(Identifiability, CsvLayout) {
    const auto p = user_with_top4(9, {{0, 0}, {2, 0}, {0, 2}, {2, 2}});
    std::ostringstream out;
    write_identifiability_csv(out, identifiability_table(p, {2}));
    EXPECT_EQ(out.str(), "factor,d,users\n2,4,1\n2,3,0\n2,2,0\n2,1,0\n");
}

TEST(EstimatePopulation, AllHomesInOneRegion) {
    const GridSpec s = spec_10();
    const BBox gb = grid_bbox(s);
    std::vector<HomeAssignment> homes;
    for (int i = 0; i < 10; ++i) homes.push_back({i, {i % 10, i / 2}, 3});
    const std::vector<NamedPolygon> regions{lonlat_rect("all", gb.west, gb.south, gb.east, gb.north)};
    const PopulationEstimate e = estimate_population(homes, s, regions);
    ASSERT_EQ(e.regions.size(), 1u);
    EXPECT_EQ(e.regions[0].estimated, 10);
    EXPECT_EQ(e.unassigned, 0);
}

TEST(EstimatePopulation, LowCoverageRegionIsDropped) {
    const GridSpec s = spec_10();
    const BBox gb = grid_bbox(s);
    const double width = gb.east - gb.west;
    // 20% of this region overlaps the grid.
    const std::vector<NamedPolygon> regions{
        lonlat_rect("edge", gb.east - 0.2 * width, gb.south, gb.east + 0.8 * width, gb.north)};
    const std::vector<HomeAssignment> homes{{1, {9, 5}, 1}};
    const PopulationEstimate e = estimate_population(homes, s, regions);
    EXPECT_TRUE(e.regions.empty());
}

TEST(EstimatePopulation, MatchesPointInPolygonOracle) {
    oracle::Rng rng(179);
    const GridSpec s = spec_10();
    const BBox gb = grid_bbox(s);
    const double split = gb.west + rng.real(0.3, 0.7) * (gb.east - gb.west);
    const std::vector<NamedPolygon> regions{lonlat_rect("west", gb.west, gb.south, split, gb.north),
                                            lonlat_rect("east", split, gb.south, gb.east, gb.north)};
    std::vector<HomeAssignment> homes;
    for (int i = 0; i < 300; ++i) homes.push_back({i, {rng.integer(0, 9), rng.integer(0, 9)}, 1});
    std::int64_t west = 0, east = 0;
    for (const auto& h : homes) {
        const Eigen::Vector2d ll = cell_to_geo(s, h.cell.x, h.cell.y);
        const Eigen::Vector2d p(ll.y(), ll.x());
        if (oracle::winding_number(regions[0].parts[0][0], p) != 0)
            ++west;
        else if (oracle::winding_number(regions[1].parts[0][0], p) != 0)
            ++east;
    }
    const PopulationEstimate e = estimate_population(homes, s, regions);
    ASSERT_EQ(e.regions.size(), 2u);
    EXPECT_EQ(e.regions[0].estimated, west);
    EXPECT_EQ(e.regions[1].estimated, east);
    EXPECT_EQ(west + east, 300);
}

TEST(EstimatePopulation, OverlapWarnsAndFirstWins) {
    const GridSpec s = spec_10();
    const BBox gb = grid_bbox(s);
    const std::vector<NamedPolygon> regions{lonlat_rect("a", gb.west, gb.south, gb.east, gb.north),
                                            lonlat_rect("b", gb.west, gb.south, gb.east, gb.north)};
    const std::vector<HomeAssignment> homes{{1, {1, 1}, 1}, {2, {8, 8}, 1}};
    const PopulationEstimate e = estimate_population(homes, s, regions);
    ASSERT_EQ(e.regions.size(), 2u);
    EXPECT_EQ(e.regions[0].estimated, 2);
    EXPECT_EQ(e.regions[1].estimated, 0);
    EXPECT_FALSE(e.warnings.empty());
}
