#include "gridloc/grid.hpp"

#include "gridloc/csv.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

namespace gridloc {

void validate(const GridSpec& spec) {
    if (!(spec.cell_size_m > 0)) throw Error("grid cell_size_m must be positive");
    if (spec.width_cells < 1 || spec.height_cells < 1) throw Error("grid dimensions must be >= 1");
    if (!(spec.scale_x > 0) || !(spec.scale_y > 0)) throw Error("grid scales must be positive");
    if (!(std::abs(spec.anchor_lat) < 90)) throw Error("grid anchor latitude out of range");
}

ProjectionRef grid_projection(const GridSpec& spec) {
    return ProjectionRef{spec.anchor_lat, spec.anchor_lon, spec.ref_lat, kEarthRadiusM};
}

Eigen::Vector2d cell_extent_m(const GridSpec& spec) {
    return {spec.cell_size_m / spec.scale_x, spec.cell_size_m / spec.scale_y};
}

int data_width(const GridSpec& spec) { return swaps_axes(spec.axes) ? spec.height_cells : spec.width_cells; }
int data_height(const GridSpec& spec) { return swaps_axes(spec.axes) ? spec.width_cells : spec.height_cells; }

CellIndex data_to_geo(const GridSpec& spec, CellIndex data) {
    return map_index(spec.axes, data, data_width(spec), data_height(spec));
}

CellIndex geo_to_data(const GridSpec& spec, CellIndex geo) {
    return map_index(inverse(spec.axes), geo, spec.width_cells, spec.height_cells);
}

std::optional<CellIndex> discretize(double lat, double lon, const GridSpec& spec) {
    const Eigen::Vector2d m = project(lat, lon, grid_projection(spec));
    const Eigen::Vector2d cell = m.cwiseQuotient(cell_extent_m(spec)).array().floor();
    if (cell.x() < 0 || cell.y() < 0 || cell.x() >= spec.width_cells || cell.y() >= spec.height_cells)
        return std::nullopt;
    return geo_to_data(spec, {static_cast<int>(cell.x()), static_cast<int>(cell.y())});
}

std::optional<CellIndex> discretize(const GeoPing& ping, const GridSpec& spec) {
    return discretize(ping.lat, ping.lon, spec);
}

DiscretizedPings discretize_pings(std::span<const GeoPing> pings, const GridSpec& spec) {
    using namespace std::chrono;
    DiscretizedPings out;
    if (pings.empty()) return out;
    const auto first_day = floor<days>(
        std::min_element(pings.begin(), pings.end(), [](const GeoPing& a, const GeoPing& b) {
            return a.time < b.time;
        })->time);

    std::unordered_map<std::string, std::int64_t> ids;
    for (const GeoPing& p : pings) {
        auto cell = discretize(p, spec);
        if (!cell) {
            ++out.out_of_bounds;
            continue;
        }
        auto [it, inserted] = ids.try_emplace(p.uid, static_cast<std::int64_t>(out.uids.size()));
        if (inserted) out.uids.push_back(p.uid);
        const auto day = floor<days>(p.time);
        const auto since_midnight = duration_cast<minutes>(p.time - day);
        out.pings.push_back(PingRecord{it->second, static_cast<int>((day - first_day).count()),
                                       static_cast<int>(since_midnight.count() / 30), cell->x, cell->y});
    }
    return out;
}

ActivityRaster accumulate(std::span<const PingRecord> pings, int width, int height, CountMode mode) {
    ActivityRaster out = ActivityRaster::Zero(height, width);
    auto in_range = [&](const PingRecord& p) {
        return p.cell_x >= 0 && p.cell_y >= 0 && p.cell_x < width && p.cell_y < height;
    };
    if (mode == CountMode::records) {
        for (const PingRecord& p : pings) {
            if (in_range(p)) ++out(p.cell_y, p.cell_x);
        }
        return out;
    }
    // Distinct (cell, uid) pairs via sort + unique: O(pings) transient memory.
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    pairs.reserve(pings.size());
    for (const PingRecord& p : pings) {
        if (in_range(p)) pairs.emplace_back(std::int64_t{p.cell_y} * width + p.cell_x, p.uid);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (const auto& [cell, uid] : pairs) ++out(cell / width, cell % width);
    return out;
}

BinaryImage threshold(const ActivityRaster& raster, std::int64_t t) {
    if (t < 0) throw Error("threshold must be non-negative");
    return threshold_at(raster, t);
}

BinaryImage threshold_nonzero(const ActivityRaster& raster) { return threshold_at(raster, std::int64_t{1}); }

BinaryImage threshold_real(const RealRaster& raster, double t) { return threshold_at(raster, t); }

RealRaster log_view(const ActivityRaster& raster) {
    return (raster.cast<double>() + 1.0).log10();
}

namespace {

template <typename Scalar>
void write_cells(std::ostream& out, const Raster<Scalar>& raster) {
    csv::write_row(out, {"x", "y", "value"});
    char buf[64];
    for (Eigen::Index y = 0; y < raster.rows(); ++y) {
        for (Eigen::Index x = 0; x < raster.cols(); ++x) {
            auto res = std::to_chars(buf, buf + sizeof buf, raster(y, x));
            out << x << ',' << y << ',' << std::string_view(buf, res.ptr - buf) << '\n';
        }
    }
}

}  // namespace

void write_raster_csv(std::ostream& out, const RealRaster& raster) { write_cells(out, raster); }
void write_raster_csv(std::ostream& out, const ActivityRaster& raster) { write_cells(out, raster); }

RealRaster read_raster_csv(std::istream& in, std::optional<int> width, std::optional<int> height) {
    csv::Reader reader(in);
    const std::size_t cx = reader.column("x"), cy = reader.column("y"), cv = reader.column("value");
    struct Cell {
        long long x, y;
        double v;
    };
    std::vector<Cell> cells;
    long long max_x = -1, max_y = -1;
    while (auto rec = reader.next()) {
        if (rec->fields.size() != reader.header().size())
            throw ParseError("wrong number of fields", rec->line);
        auto x = csv::to_int(rec->fields[cx]);
        auto y = csv::to_int(rec->fields[cy]);
        auto v = csv::to_real(rec->fields[cv]);
        if (!x || !y || !v) throw ParseError("malformed raster cell", rec->line);
        if (*x < 0 || *y < 0) throw ParseError("negative cell index", rec->line);
        if (*v < 0) throw ParseError("negative cell value", rec->line);
        if ((width && *x >= *width) || (height && *y >= *height))
            throw ParseError("cell index outside declared dimensions", rec->line);
        max_x = std::max(max_x, *x);
        max_y = std::max(max_y, *y);
        cells.push_back({*x, *y, *v});
    }
    const int w = width.value_or(static_cast<int>(max_x + 1));
    const int h = height.value_or(static_cast<int>(max_y + 1));
    RealRaster out = RealRaster::Zero(h, w);
    for (const Cell& c : cells) out(c.y, c.x) = c.v;
    return out;
}

ActivityRaster read_count_raster_csv(std::istream& in, std::optional<int> width, std::optional<int> height) {
    const RealRaster r = read_raster_csv(in, width, height);
    if ((r != r.round()).any()) throw ParseError("count raster holds fractional values");
    return r.cast<std::int64_t>();
}

}  // namespace gridloc
