#pragma once

#include "gridloc/polygon.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace gridloc {

inline constexpr int kSlotsPerDay = 48;

/// One observation of one user on the published cell grid.
struct PingRecord {
    std::int64_t uid = 0;
    int day = 0;
    int slot = 0;  ///< 30-minute slot of the day, [0, 47]
    int cell_x = 0;
    int cell_y = 0;

    friend bool operator==(const PingRecord&, const PingRecord&) = default;
};

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// One raw geographic observation.
struct GeoPing {
    std::string uid;
    Timestamp time{};
    double lat = 0;
    double lon = 0;
};

struct CensusRow {
    std::string region_name;  ///< already NFC-normalized and trimmed
    std::int64_t population = 0;
};

/// Caller-declared column names for grid ping CSVs. `index_base` is subtracted
/// from the raw x/y columns (1 for sources that number cells from one).
struct GridPingLayout {
    std::string uid = "uid";
    std::string day = "d";
    std::string slot = "t";
    std::string x = "x";
    std::string y = "y";
    int index_base = 0;
    int width_cells = 200;
    int height_cells = 200;
};

struct GeoPingLayout {
    std::string uid = "uid";
    std::string timestamp = "timestamp";
    std::string lat = "lat";
    std::string lon = "lon";
};

struct CensusLayout {
    std::string region = "region";
    std::string population = "population";
};

struct DayRange {
    int first = 0;
    int last = 0;  ///< inclusive
};

struct ParseOptions {
    /// Skip and record bad rows instead of throwing on the first one.
    bool permissive = false;
    /// Grid pings outside this day range are dropped (counted as filtered).
    std::optional<DayRange> days;
};

template <typename Row>
struct Parsed {
    std::vector<Row> rows;
    std::size_t body_rows = 0;
    std::size_t rejected = 0;
    std::size_t filtered = 0;
    std::vector<std::string> warnings;
};

Parsed<PingRecord> parse_grid_pings(std::istream& in, const GridPingLayout& layout = {},
                                    const ParseOptions& options = {});

void write_grid_pings(std::ostream& out, std::span<const PingRecord> pings,
                      const GridPingLayout& layout = {});

Parsed<GeoPing> parse_geo_pings(std::istream& in, const GeoPingLayout& layout = {},
                                const ParseOptions& options = {});

/// ISO-8601 instant: date, 'T' or space, hh:mm[:ss[.fff]], then 'Z' or
/// a +hh:mm / -hh:mm offset. A missing zone designator is read as UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);

Parsed<CensusRow> parse_census(std::istream& in, const CensusLayout& layout = {},
                               const ParseOptions& options = {});

/// GeoJSON FeatureCollection of Polygon / MultiPolygon features. The feature
/// name is read from `name_property`. Rings come back orientation-normalized.
std::vector<NamedPolygon> parse_polygons(std::istream& in,
                                         const std::string& name_property = "name");

}  // namespace gridloc
