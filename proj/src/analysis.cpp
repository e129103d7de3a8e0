#include "gridloc/analysis.hpp"

#include "gridloc/csv.hpp"
#include "gridloc/error.hpp"
#include "gridloc/geo.hpp"
#include "gridloc/georef.hpp"
#include "gridloc/parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace gridloc {

NightWindow default_night_window() {
    NightWindow w;
    for (int s = 42; s < kSlotsPerDay; ++s) w.set(s);
    for (int s = 0; s <= 15; ++s) w.set(s);
    return w;
}

UserPings group_by_user(std::span<const PingRecord> pings) {
    UserPings out;
    out.pings.assign(pings.begin(), pings.end());
    std::stable_sort(out.pings.begin(), out.pings.end(),
                     [](const PingRecord& a, const PingRecord& b) { return a.uid < b.uid; });
    for (std::size_t i = 0; i < out.pings.size(); ++i) {
        if (i == 0 || out.pings[i].uid != out.pings[i - 1].uid) out.starts.push_back(i);
    }
    out.starts.push_back(out.pings.size());
    if (out.pings.empty()) out.starts.clear();
    return out;
}

namespace {

// Per-cell counts, best first: count descending, then row-major.
std::vector<std::pair<CellIndex, std::int64_t>> ranked_cells(std::span<const PingRecord> pings,
                                                             const NightWindow* night) {
    std::map<CellIndex, std::int64_t> counts;
    for (const PingRecord& p : pings) {
        if (!night || night->test(static_cast<std::size_t>(p.slot))) ++counts[{p.cell_x, p.cell_y}];
    }
    std::vector<std::pair<CellIndex, std::int64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return row_major_less(a.first, b.first);
    });
    return ranked;
}

}  // namespace

std::optional<HomeAssignment> detect_home(std::span<const PingRecord> user_pings, const NightWindow& night) {
    const auto ranked = ranked_cells(user_pings, &night);
    if (ranked.empty()) return std::nullopt;
    return HomeAssignment{user_pings.front().uid, ranked.front().first, ranked.front().second};
}

std::vector<HomeAssignment> detect_homes(std::span<const PingRecord> pings, const NightWindow& night,
                                         int threads) {
    const UserPings users = group_by_user(pings);
    std::vector<std::optional<HomeAssignment>> found(users.users());
    parallel_for(found.size(), threads, [&](std::size_t i) { found[i] = detect_home(users.user(i), night); });
    std::vector<HomeAssignment> out;
    for (auto& h : found) {
        if (h) out.push_back(*h);
    }
    return out;
}

PopulationEstimate estimate_population(std::span<const HomeAssignment> homes, const GridSpec& grid,
                                       std::span<const NamedPolygon> regions, double coverage_min) {
    PopulationEstimate out;
    std::vector<std::int64_t> counts(regions.size(), 0);
    std::size_t overlaps = 0;
    for (const HomeAssignment& h : homes) {
        const Eigen::Vector2d ll = cell_to_geo(grid, h.cell.x, h.cell.y);
        const Eigen::Vector2d lon_lat(ll.y(), ll.x());
        std::optional<std::size_t> owner;
        for (std::size_t r = 0; r < regions.size(); ++r) {
            if (!point_in_polygon(lon_lat, regions[r])) continue;
            if (!owner)
                owner = r;
            else
                ++overlaps;
        }
        if (owner)
            ++counts[*owner];
        else
            ++out.unassigned;
    }
    if (overlaps) {
        out.warnings.push_back(std::to_string(overlaps) +
                               " home(s) fell in overlapping regions; the first region in input order was used");
    }

    const BBox box = grid_bbox(grid);
    const ProjectionRef ref = grid_projection(grid);
    for (std::size_t r = 0; r < regions.size(); ++r) {
        const double cov = coverage_fraction(regions[r], box, ref);
        if (cov < coverage_min) continue;
        out.regions.push_back({regions[r].name, counts[r], cov});
    }
    return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error("pearson: inputs differ in length");
    if (xs.size() < 2) throw Error("pearson: need at least two samples");
    const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
    const Eigen::Map<const Eigen::ArrayXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    const Eigen::ArrayXd dx = x - x.mean();
    const Eigen::ArrayXd dy = y - y.mean();
    const double sxx = dx.square().sum(), syy = dy.square().sum();
    if (sxx == 0 || syy == 0) throw Error("pearson: zero variance");
    return std::clamp((dx * dy).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<CellIndex> top_locations(std::span<const PingRecord> user_pings, std::size_t k) {
    const auto ranked = ranked_cells(user_pings, nullptr);
    std::vector<CellIndex> out;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].first);
    return out;
}

int distinct_after_coarsening(std::span<const CellIndex> cells, int factor) {
    if (factor < 1) throw Error("coarsening factor must be >= 1");
    std::vector<CellIndex> images;
    for (const CellIndex& c : cells) images.push_back({c.x / factor, c.y / factor});
    std::sort(images.begin(), images.end());
    return static_cast<int>(std::unique(images.begin(), images.end()) - images.begin());
}

IdentifiabilityTable identifiability_table(std::span<const PingRecord> pings, const std::vector<int>& factors,
                                           int threads) {
    constexpr std::size_t k = 4;
    const UserPings users = group_by_user(pings);
    std::vector<std::vector<CellIndex>> tops(users.users());
    parallel_for(tops.size(), threads, [&](std::size_t i) { tops[i] = top_locations(users.user(i), k); });

    IdentifiabilityTable table;
    table.factors = factors;
    table.users = Eigen::Matrix<std::int64_t, 4, Eigen::Dynamic>::Zero(4, static_cast<Eigen::Index>(factors.size()));
    for (const auto& top : tops) {
        if (top.size() < k) {
            ++table.excluded_users;
            continue;
        }
        ++table.ranked_users;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            const int d = distinct_after_coarsening(top, factors[j]);
            ++table.users(4 - d, static_cast<Eigen::Index>(j));
        }
    }
    return table;
}

void write_identifiability_csv(std::ostream& out, const IdentifiabilityTable& table) {
    csv::write_row(out, {"factor", "d", "users"});
    for (std::size_t j = 0; j < table.factors.size(); ++j) {
        for (int d = 4; d >= 1; --d) {
            csv::write_row(out, {std::to_string(table.factors[j]), std::to_string(d),
                                 std::to_string(table.at(d, j))});
        }
    }
}

}  // namespace gridloc
