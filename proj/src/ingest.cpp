#include "gridloc/ingest.hpp"

#include "gridloc/csv.hpp"
#include "gridloc/error.hpp"
#include "gridloc/text.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>

namespace gridloc {
namespace {

// Runs `convert` on every body row, applying the strict/permissive policy.
template <typename Row, typename Convert>
Parsed<Row> parse_rows(csv::Reader& reader, std::size_t arity, const ParseOptions& options,
                       Convert convert) {
    Parsed<Row> result;
    while (auto rec = reader.next()) {
        ++result.body_rows;
        try {
            if (rec->fields.size() != arity) {
                throw ParseError("expected " + std::to_string(arity) + " fields, found " +
                                     std::to_string(rec->fields.size()),
                                 rec->line);
            }
            std::optional<Row> row = convert(*rec);
            if (row)
                result.rows.push_back(std::move(*row));
            else
                ++result.filtered;
        } catch (const ParseError& e) {
            if (!options.permissive) throw;
            ++result.rejected;
            result.warnings.emplace_back(e.what());
        }
    }
    return result;
}

long long int_field(const csv::Record& rec, std::size_t col, const std::string& name) {
    auto v = csv::to_int(rec.fields[col]);
    if (!v) throw ParseError("field '" + name + "' is not an integer", rec.line);
    return *v;
}

double real_field(const csv::Record& rec, std::size_t col, const std::string& name) {
    auto v = csv::to_real(rec.fields[col]);
    if (!v) throw ParseError("field '" + name + "' is not a number", rec.line);
    return *v;
}

void check_range(long long v, long long lo, long long hi, const std::string& name,
                 std::size_t line) {
    if (v < lo || v > hi) {
        throw ParseError(name + " out of range [" + std::to_string(lo) + "," + std::to_string(hi) +
                             "]",
                         line);
    }
}

}  // namespace

Parsed<PingRecord> parse_grid_pings(std::istream& in, const GridPingLayout& layout,
                                    const ParseOptions& options) {
    csv::Reader reader(in);
    const std::size_t c_uid = reader.column(layout.uid);
    const std::size_t c_day = reader.column(layout.day);
    const std::size_t c_slot = reader.column(layout.slot);
    const std::size_t c_x = reader.column(layout.x);
    const std::size_t c_y = reader.column(layout.y);

    return parse_rows<PingRecord>(
        reader, reader.header().size(), options,
        [&](const csv::Record& rec) -> std::optional<PingRecord> {
            const long long uid = int_field(rec, c_uid, layout.uid);
            const long long day = int_field(rec, c_day, layout.day);
            const long long slot = int_field(rec, c_slot, layout.slot);
            const long long x = int_field(rec, c_x, layout.x) - layout.index_base;
            const long long y = int_field(rec, c_y, layout.y) - layout.index_base;
            if (uid < 0) throw ParseError("uid must be non-negative", rec.line);
            if (day < 0) throw ParseError("day must be non-negative", rec.line);
            check_range(slot, 0, kSlotsPerDay - 1, "slot", rec.line);
            check_range(x, 0, layout.width_cells - 1, "cell_x", rec.line);
            check_range(y, 0, layout.height_cells - 1, "cell_y", rec.line);
            if (options.days && (day < options.days->first || day > options.days->last))
                return std::nullopt;
            return PingRecord{uid, static_cast<int>(day), static_cast<int>(slot),
                              static_cast<int>(x), static_cast<int>(y)};
        });
}

void write_grid_pings(std::ostream& out, std::span<const PingRecord> pings,
                      const GridPingLayout& layout) {
    csv::write_row(out, {layout.uid, layout.day, layout.slot, layout.x, layout.y});
    for (const PingRecord& p : pings) {
        csv::write_row(out, {std::to_string(p.uid), std::to_string(p.day), std::to_string(p.slot),
                             std::to_string(p.cell_x + layout.index_base),
                             std::to_string(p.cell_y + layout.index_base)});
    }
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<int> {
        if (pos + n > s.size()) return std::nullopt;
        int v = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    auto yy = digits(0, 4), mo = digits(5, 2), dd = digits(8, 2);
    if (!yy || !mo || !dd || s.size() < 16 || s[4] != '-' || s[7] != '-' ||
        (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
        return std::nullopt;
    auto hh = digits(11, 2), mi = digits(14, 2);
    if (!hh || !mi) return std::nullopt;

    std::size_t pos = 16;
    int sec = 0;
    milliseconds frac{0};
    if (pos < s.size() && s[pos] == ':') {
        auto ss = digits(pos + 1, 2);
        if (!ss) return std::nullopt;
        sec = *ss;
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            int scale = 100;
            std::size_t start = pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                frac += milliseconds((s[pos] - '0') * scale);
                scale /= 10;
                ++pos;
            }
            if (pos == start) return std::nullopt;
        }
    }

    minutes offset{0};
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            ++pos;
        } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
            auto oh = digits(pos + 1, 2), om = digits(pos + 4, 2);
            if (!oh || !om || *oh > 23 || *om > 59) return std::nullopt;
            offset = hours(*oh) + minutes(*om);
            if (s[pos] == '-') offset = -offset;
            pos = s.size();
        } else {
            return std::nullopt;
        }
    }

    const year_month_day date{year{*yy}, month{static_cast<unsigned>(*mo)},
                              day{static_cast<unsigned>(*dd)}};
    if (!date.ok() || *hh > 23 || *mi > 59 || sec > 60) return std::nullopt;
    return sys_days{date} + hours(*hh) + minutes(*mi) + seconds(sec) + frac - offset;
}

Parsed<GeoPing> parse_geo_pings(std::istream& in, const GeoPingLayout& layout,
                                const ParseOptions& options) {
    csv::Reader reader(in);
    const std::size_t c_uid = reader.column(layout.uid);
    const std::size_t c_ts = reader.column(layout.timestamp);
    const std::size_t c_lat = reader.column(layout.lat);
    const std::size_t c_lon = reader.column(layout.lon);

    return parse_rows<GeoPing>(
        reader, reader.header().size(), options,
        [&](const csv::Record& rec) -> std::optional<GeoPing> {
            GeoPing p;
            p.uid = rec.fields[c_uid];
            if (p.uid.empty()) throw ParseError("empty uid", rec.line);
            auto ts = parse_timestamp(rec.fields[c_ts]);
            if (!ts) throw ParseError("unparseable timestamp '" + rec.fields[c_ts] + "'", rec.line);
            p.time = *ts;
            p.lat = real_field(rec, c_lat, layout.lat);
            p.lon = real_field(rec, c_lon, layout.lon);
            if (p.lat < -90 || p.lat > 90) throw ParseError("lat out of range [-90,90]", rec.line);
            if (p.lon < -180 || p.lon > 180)
                throw ParseError("lon out of range [-180,180]", rec.line);
            return p;
        });
}

Parsed<CensusRow> parse_census(std::istream& in, const CensusLayout& layout,
                               const ParseOptions& options) {
    csv::Reader reader(in);
    const std::size_t c_region = reader.column(layout.region);
    const std::size_t c_pop = reader.column(layout.population);

    return parse_rows<CensusRow>(
        reader, reader.header().size(), options,
        [&](const csv::Record& rec) -> std::optional<CensusRow> {
            CensusRow row;
            try {
                row.region_name = normalize_name(rec.fields[c_region]);
            } catch (const Error& e) {
                throw ParseError(e.what(), rec.line);
            }
            if (row.region_name.empty()) throw ParseError("empty region name", rec.line);
            row.population = int_field(rec, c_pop, layout.population);
            if (row.population < 0) throw ParseError("negative population", rec.line);
            return row;
        });
}

namespace {

using nlohmann::json;

Ring parse_ring(const json& coords, const std::string& feature) {
    if (!coords.is_array()) throw ParseError("feature '" + feature + "': ring is not an array");
    Ring ring;
    ring.reserve(coords.size());
    for (const json& c : coords) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
            throw ParseError("feature '" + feature + "': malformed position");
        const double lon = c[0].get<double>();
        const double lat = c[1].get<double>();
        if (lon < -180 || lon > 180 || lat < -90 || lat > 90)
            throw ParseError("feature '" + feature + "': coordinate out of lon/lat bounds");
        ring.emplace_back(lon, lat);
    }
    if (ring.size() < 4) throw ParseError("feature '" + feature + "': ring has fewer than 4 positions");
    if (ring.front() != ring.back()) throw ParseError("feature '" + feature + "': unclosed ring");
    return ring;
}

PolygonPart parse_part(const json& rings, const std::string& feature) {
    if (!rings.is_array() || rings.empty())
        throw ParseError("feature '" + feature + "': polygon without rings");
    PolygonPart part;
    for (const json& r : rings) part.push_back(parse_ring(r, feature));
    return part;
}

}  // namespace

std::vector<NamedPolygon> parse_polygons(std::istream& in, const std::string& name_property) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid GeoJSON: ") + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
        !doc["features"].is_array())
        throw ParseError("GeoJSON root is not a FeatureCollection");

    std::vector<NamedPolygon> out;
    for (const json& feature : doc["features"]) {
        NamedPolygon poly;
        if (feature.contains("properties") && feature["properties"].is_object()) {
            const json& props = feature["properties"];
            if (props.contains(name_property) && props[name_property].is_string())
                poly.name = normalize_name(props[name_property].get<std::string>());
        }
        if (!feature.contains("geometry") || !feature["geometry"].is_object())
            throw ParseError("feature '" + poly.name + "' has no geometry");
        const json& geom = feature["geometry"];
        const std::string type = geom.value("type", "");
        if (type == "Polygon") {
            poly.parts.push_back(parse_part(geom.at("coordinates"), poly.name));
        } else if (type == "MultiPolygon") {
            for (const json& p : geom.at("coordinates")) poly.parts.push_back(parse_part(p, poly.name));
        } else {
            throw ParseError("unsupported geometry type '" + type + "'");
        }
        normalize_orientation(poly);
        out.push_back(std::move(poly));
    }
    return out;
}

}  // namespace gridloc
