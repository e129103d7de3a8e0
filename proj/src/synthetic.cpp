#include "gridloc/synthetic.hpp"

#include "gridloc/analysis.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gridloc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Ring to_lon_lat(const std::vector<Eigen::Vector2d>& meters, const ProjectionRef& ref) {
    Ring ring;
    ring.reserve(meters.size() + 1);
    for (const auto& m : meters) {
        const Eigen::Vector2d ll = unproject(m, ref);
        ring.emplace_back(ll.y(), ll.x());
    }
    ring.push_back(ring.front());
    return ring;
}

struct MeterPolygon {
    PolygonPart part;  // meters, (east, south)
    Eigen::Vector2d lo, hi;
};

MeterPolygon make_meter_polygon(std::vector<Eigen::Vector2d> pts) {
    MeterPolygon p;
    p.lo = p.hi = pts.front();
    for (const auto& v : pts) {
        p.lo = p.lo.cwiseMin(v);
        p.hi = p.hi.cwiseMax(v);
    }
    pts.push_back(pts.front());
    p.part.push_back(std::move(pts));
    return p;
}

}  // namespace

SyntheticWorld generate_world(const SyntheticConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

    SyntheticWorld world;
    world.config = cfg;

    // Background bbox spanning exactly the requested meters.
    const double k = std::numbers::pi / 180.0 * kEarthRadiusM;
    world.bbox.north = cfg.north;
    world.bbox.west = cfg.west;
    world.bbox.south = cfg.north - cfg.background_height_m / k;
    world.bbox.east = cfg.west + cfg.background_width_m / (k * std::cos(world.bbox.center_lat() * std::numbers::pi / 180.0));
    world.ref = projection_for(world.bbox);
    const double W = cfg.background_width_m, H = cfg.background_height_m;

    // Coastline: land south of a sum of sinusoids, padded past the bbox edges.
    std::vector<MeterPolygon> land_m;
    {
        struct Wave {
            double amp, freq, phase;
        };
        std::vector<Wave> waves;
        const double amps[] = {0.11, 0.07, 0.045, 0.03, 0.02};
        const double freqs[] = {1.0, 2.0, 3.5, 5.0, 8.0};
        for (int i = 0; i < 5; ++i) waves.push_back({amps[i] * H * uniform(0.7, 1.3), freqs[i], uniform(0, kTwoPi)});
        const double base = H * uniform(0.40, 0.50);
        std::vector<Eigen::Vector2d> pts;
        const double pad = 2000;
        for (double x = -pad; x <= W + pad; x += 1000) {
            double y = base;
            for (const Wave& w : waves) y += w.amp * std::sin(kTwoPi * w.freq * x / W + w.phase);
            pts.emplace_back(x, y);
        }
        pts.emplace_back(W + pad, H + pad);
        pts.emplace_back(-pad, H + pad);
        land_m.push_back(make_meter_polygon(std::move(pts)));
    }
    // Islands and peninsulas: star-shaped blobs.
    for (int i = 0; i < cfg.islands; ++i) {
        const Eigen::Vector2d c(uniform(0, W), uniform(0.05 * H, 0.7 * H));
        const double radius = uniform(3000, 14000);
        const double a2 = uniform(0, 0.3), a3 = uniform(0, 0.2), p2 = uniform(0, kTwoPi), p3 = uniform(0, kTwoPi);
        std::vector<Eigen::Vector2d> pts;
        for (int v = 0; v < 48; ++v) {
            const double t = kTwoPi * v / 48;
            const double r = radius * (1 + a2 * std::sin(2 * t + p2) + a3 * std::sin(3 * t + p3));
            pts.push_back(c + r * Eigen::Vector2d(std::cos(t), std::sin(t)));
        }
        land_m.push_back(make_meter_polygon(std::move(pts)));
    }
    for (std::size_t i = 0; i < land_m.size(); ++i) {
        NamedPolygon poly{i == 0 ? "mainland" : "island-" + std::to_string(i), {}};
        poly.parts.push_back({to_lon_lat(std::vector<Eigen::Vector2d>(land_m[i].part[0].begin(),
                                                                       land_m[i].part[0].end() - 1),
                                         world.ref)});
        normalize_orientation(poly);
        world.land.push_back(std::move(poly));
    }
    auto on_land = [&](const Eigen::Vector2d& m) {
        for (const MeterPolygon& p : land_m) {
            if ((m.array() < p.lo.array()).any() || (m.array() > p.hi.array()).any()) continue;
            if (part_contains(p.part, m)) return true;
        }
        return false;
    };

    // Ground-truth grid placed so it straddles the coast.
    const Eigen::Vector2d cell_m(cfg.pixel_size_m / cfg.stretch_x, cfg.pixel_size_m / cfg.stretch_y);
    const Eigen::Vector2d grid_m = cell_m * cfg.grid_cells;
    const Eigen::Vector2d margin(0.05 * W, 0.05 * H);
    const Eigen::Vector2d anchor_m(uniform(margin.x(), std::max(margin.x(), W - grid_m.x() - margin.x())),
                                   uniform(margin.y(), std::max(margin.y(), H - grid_m.y() - margin.y())));
    const Eigen::Vector2d anchor_ll = unproject(anchor_m, world.ref);

    world.data_transform = cfg.random_dihedral
                               ? kAllDihedral[std::uniform_int_distribution<int>(0, 7)(rng)]
                               : Dihedral::identity;
    GridSpec& truth = world.truth;
    truth.anchor_lat = anchor_ll.x();
    truth.anchor_lon = anchor_ll.y();
    truth.cell_size_m = cfg.pixel_size_m;
    truth.width_cells = truth.height_cells = cfg.grid_cells;
    truth.ref_lat = world.ref.ref_lat;
    truth.scale_x = cfg.stretch_x;
    truth.scale_y = cfg.stretch_y;
    truth.axes = inverse(world.data_transform);

    const NightWindow night = default_night_window();
    std::vector<int> night_slots, day_slots;
    for (int s = 0; s < kSlotsPerDay; ++s) (night.test(s) ? night_slots : day_slots).push_back(s);
    auto pick = [&](const std::vector<int>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };

    // Pings: uniform over the grid, thinned off land by the density ratio.
    // Background traffic is daytime only so it never creates homes.
    std::uniform_int_distribution<int> user_dist(0, std::max(0, cfg.users - 1));
    std::uniform_int_distribution<int> day_dist(0, 74);
    auto emit = [&](std::int64_t uid, const Eigen::Vector2d& m, int day, int slot) {
        const Eigen::Vector2d ll = unproject(m, world.ref);
        if (auto cell = discretize(ll.x(), ll.y(), truth))
            world.pings.push_back({uid, day, slot, cell->x, cell->y});
    };
    auto sample_in = [&](const Eigen::Vector2d& lo_cell, const Eigen::Vector2d& hi_cell) {
        const Eigen::Vector2d u(uniform(lo_cell.x(), hi_cell.x()), uniform(lo_cell.y(), hi_cell.y()));
        return Eigen::Vector2d(anchor_m + u.cwiseProduct(cell_m));
    };
    const Eigen::Vector2d full_lo(0, 0), full_hi(cfg.grid_cells, cfg.grid_cells);
    while (world.pings.size() < cfg.pings) {
        const Eigen::Vector2d m = sample_in(full_lo, full_hi);
        if (!on_land(m) && uniform(0, 1) >= 1.0 / cfg.land_density_ratio) continue;
        emit(user_dist(rng), m, day_dist(rng), pick(day_slots));
    }

    if (!cfg.with_regions) return world;

    // Regions: a rows x cols tiling of the grid, plus one mostly outside it.
    const ProjectionRef grid_ref = grid_projection(truth);
    auto rect = [&](const std::string& name, Eigen::Vector2d lo_cell, Eigen::Vector2d hi_cell) {
        std::vector<Eigen::Vector2d> pts = {lo_cell, {lo_cell.x(), hi_cell.y()}, hi_cell, {hi_cell.x(), lo_cell.y()}};
        for (auto& p : pts) p = p.cwiseProduct(cell_m);
        NamedPolygon poly{name, {{to_lon_lat(pts, grid_ref)}}};
        normalize_orientation(poly);
        return poly;
    };
    std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> extents;
    for (int r = 0; r < cfg.region_rows; ++r) {
        for (int c = 0; c < cfg.region_cols; ++c) {
            const Eigen::Vector2d lo(double(cfg.grid_cells) * c / cfg.region_cols,
                                     double(cfg.grid_cells) * r / cfg.region_rows);
            const Eigen::Vector2d hi(double(cfg.grid_cells) * (c + 1) / cfg.region_cols,
                                     double(cfg.grid_cells) * (r + 1) / cfg.region_rows);
            world.regions.push_back(rect("region-" + std::to_string(r) + "-" + std::to_string(c), lo, hi));
            extents.emplace_back(lo, hi);
        }
    }
    // 20% of this one lies inside the grid's east edge.
    const double g = cfg.grid_cells;
    world.regions.push_back(rect("outskirts", {0.95 * g, 0.2 * g}, {1.2 * g, 0.3 * g}));
    extents.emplace_back(Eigen::Vector2d(0.95 * g, 0.2 * g), Eigen::Vector2d(g, 0.3 * g));

    std::int64_t next_uid = cfg.users;
    for (std::size_t r = 0; r < world.regions.size(); ++r) {
        const std::int64_t pop = static_cast<std::int64_t>(std::llround(uniform(20000, 500000)));
        world.census.push_back({world.regions[r].name, pop});
        if (r + 1 == world.regions.size()) break;  // outskirts: census only
        const auto [lo, hi] = extents[r];
        // Inset keeps home cells inside their region despite cell rounding.
        const Eigen::Vector2d in_lo = lo.array() + 1.0, in_hi = hi.array() - 1.0;
        const auto home_users = static_cast<std::int64_t>(std::llround(double(pop) / cfg.persons_per_home_user));
        for (std::int64_t u = 0; u < home_users; ++u) {
            const std::int64_t uid = next_uid++;
            Eigen::Vector2d home = sample_in(in_lo, in_hi);
            for (int tries = 0; tries < 50 && !on_land(home); ++tries) home = sample_in(in_lo, in_hi);
            for (int i = 0; i < 6; ++i) emit(uid, home, day_dist(rng), pick(night_slots));
            for (int i = 0; i < 2; ++i) emit(uid, sample_in(full_lo, full_hi), day_dist(rng), pick(night_slots));
            for (int i = 0; i < 3; ++i) {
                Eigen::Vector2d m = sample_in(full_lo, full_hi);
                for (int tries = 0; tries < 50 && !on_land(m); ++tries) m = sample_in(full_lo, full_hi);
                emit(uid, m, day_dist(rng), pick(day_slots));
            }
        }
    }
    return world;
}

Eigen::Vector2d anchor_error_m(const GridSpec& recovered, const GridSpec& truth, const ProjectionRef& ref) {
    return project(recovered.anchor_lat, recovered.anchor_lon, ref) - project(truth.anchor_lat, truth.anchor_lon, ref);
}

}  // namespace gridloc
