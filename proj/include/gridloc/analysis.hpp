#pragma once

#include "gridloc/grid.hpp"
#include "gridloc/ingest.hpp"
#include "gridloc/polygon.hpp"

#include <Eigen/Core>

#include <bitset>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace gridloc {

/// Slots (30-minute, 0 = 00:00-00:30) counted as night for home detection.
using NightWindow = std::bitset<kSlotsPerDay>;

/// 21:00-24:00 and 00:00-08:00: slots 42..47 and 0..15.
NightWindow default_night_window();

struct HomeAssignment {
    std::int64_t uid = 0;
    CellIndex cell;
    std::int64_t night_pings = 0;  ///< night pings in the home cell
};

/// Pings grouped by uid (ascending), each group in input order.
struct UserPings {
    std::vector<PingRecord> pings;
    std::vector<std::size_t> starts;  ///< group i is [starts[i], starts[i + 1])

    std::size_t users() const { return starts.empty() ? 0 : starts.size() - 1; }
    std::span<const PingRecord> user(std::size_t i) const {
        return std::span<const PingRecord>(pings).subspan(starts[i], starts[i + 1] - starts[i]);
    }
};

UserPings group_by_user(std::span<const PingRecord> pings);

/// Cell with the most night pings for one user's pings; ties go to smaller y,
/// then smaller x. nullopt without night pings.
std::optional<HomeAssignment> detect_home(std::span<const PingRecord> user_pings,
                                          const NightWindow& night = default_night_window());

/// detect_home for every user, ordered by uid.
std::vector<HomeAssignment> detect_homes(std::span<const PingRecord> pings,
                                         const NightWindow& night = default_night_window(), int threads = 1);

struct RegionEstimate {
    std::string name;
    std::int64_t estimated = 0;
    double coverage = 0;
};

struct PopulationEstimate {
    std::vector<RegionEstimate> regions;  ///< kept regions, input order
    std::int64_t unassigned = 0;          ///< homes outside every region
    std::vector<std::string> warnings;
};

/// Counts homes per region by the region containing the home cell centroid
/// (first region in input order on overlap, with a warning). Regions covering
/// less than `coverage_min` of their area inside the grid are dropped.
PopulationEstimate estimate_population(std::span<const HomeAssignment> homes, const GridSpec& grid,
                                       std::span<const NamedPolygon> regions, double coverage_min = 0.3);

/// Product-moment correlation. Throws Error on length mismatch, fewer than
/// two samples, or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Visited cells ranked by ping count (descending), ties by smaller y then x;
/// at most k entries.
std::vector<CellIndex> top_locations(std::span<const PingRecord> user_pings, std::size_t k = 4);

/// Users bucketed by how many of their top-4 cells stay distinct after
/// coarsening by each factor. Row i holds d = 4 - i; column j is factors[j].
struct IdentifiabilityTable {
    std::vector<int> factors;
    Eigen::Matrix<std::int64_t, 4, Eigen::Dynamic> users;
    std::int64_t ranked_users = 0;    ///< users with 4 ranked locations (each column's sum)
    std::int64_t excluded_users = 0;  ///< users with fewer than 4 distinct cells

    std::int64_t at(int d, std::size_t column) const { return users(4 - d, static_cast<Eigen::Index>(column)); }
};

/// Distinct images of `cells` under floor division by `factor`.
int distinct_after_coarsening(std::span<const CellIndex> cells, int factor);

IdentifiabilityTable identifiability_table(std::span<const PingRecord> pings,
                                           const std::vector<int>& factors = {2, 4, 8, 16, 32},
                                           int threads = 1);

/// CSV rows factor,d,users.
void write_identifiability_csv(std::ostream& out, const IdentifiabilityTable& table);

}  // namespace gridloc
