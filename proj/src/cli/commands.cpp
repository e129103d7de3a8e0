#include "commands.hpp"

#include "gridloc/analysis.hpp"
#include "gridloc/csv.hpp"
#include "gridloc/georef.hpp"
#include "gridloc/grid.hpp"
#include "gridloc/hex.hpp"
#include "gridloc/ingest.hpp"
#include "gridloc/json_io.hpp"
#include "gridloc/match.hpp"
#include "gridloc/pgm.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>

namespace gridloc::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open " + p.string());
    return in;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    std::ofstream o(cfg.output(name), std::ios::binary);
    if (!o) throw Error("cannot write " + cfg.output(name).string());
    return o;
}

void write_json(const RunConfig& cfg, const std::string& name, json doc) {
    doc["config_sha256"] = cfg.digest;
    doc["seed"] = cfg.seed;
    open_out(cfg, name) << doc.dump(2) << '\n';
}

// CSV with a leading '#' provenance line (skipped by the reader).
std::ofstream csv_out(const RunConfig& cfg, const std::string& name) {
    auto o = open_out(cfg, name);
    o << "# " << cfg.stamp() << '\n';
    return o;
}

void write_gray(const RunConfig& cfg, const std::string& name, const GrayImage& img) {
    const std::vector<std::string> comments{cfg.stamp()};
    auto o = open_out(cfg, name);
    write_pgm(o, img, comments);
}

void write_bits(const RunConfig& cfg, const std::string& name, const BinaryImage& img) {
    const std::vector<std::string> comments{cfg.stamp()};
    auto o = open_out(cfg, name);
    write_pgm(o, img, comments);
}

ParseOptions parse_options(const RunConfig& cfg) {
    ParseOptions opt;
    opt.permissive = cfg.get<bool>("/pings/permissive", false);
    if (cfg.has("/pings/days")) {
        const json& d = cfg.at("/pings/days");
        opt.days = DayRange{d.at(0).get<int>(), d.at(1).get<int>()};
    }
    return opt;
}

GridSpec grid_from(const RunConfig& cfg, const std::string& key) { return cfg.at(key).get<GridSpec>(); }

struct LoadedPings {
    std::vector<PingRecord> pings;
    int width = 0;
    int height = 0;
    std::size_t out_of_bounds = 0;
    std::size_t rejected = 0;
};

LoadedPings load_pings(const RunConfig& cfg, std::ostream& err) {
    LoadedPings lp;
    const std::string format = cfg.get<std::string>("/pings/format", "grid");
    auto in = open_in(cfg.path("/pings/path"));
    const ParseOptions opt = parse_options(cfg);
    auto col = [&](const char* key, const std::string& fallback) {
        return cfg.get<std::string>(std::string("/pings/columns/") + key, fallback);
    };
    if (format == "grid") {
        GridPingLayout layout;
        layout.uid = col("uid", layout.uid);
        layout.day = col("day", layout.day);
        layout.slot = col("slot", layout.slot);
        layout.x = col("x", layout.x);
        layout.y = col("y", layout.y);
        layout.index_base = cfg.get<int>("/pings/index_base", 0);
        layout.width_cells = cfg.get<int>("/pings/width", cfg.get<int>("/grid/width_cells", 200));
        layout.height_cells = cfg.get<int>("/pings/height", cfg.get<int>("/grid/height_cells", 200));
        auto parsed = parse_grid_pings(in, layout, opt);
        lp.pings = std::move(parsed.rows);
        lp.rejected = parsed.rejected;
        for (const auto& w : parsed.warnings) err << "warning: " << w << '\n';
        lp.width = layout.width_cells;
        lp.height = layout.height_cells;
    } else if (format == "geo") {
        GeoPingLayout layout;
        layout.uid = col("uid", layout.uid);
        layout.timestamp = col("timestamp", layout.timestamp);
        layout.lat = col("lat", layout.lat);
        layout.lon = col("lon", layout.lon);
        auto parsed = parse_geo_pings(in, layout, opt);
        lp.rejected = parsed.rejected;
        for (const auto& w : parsed.warnings) err << "warning: " << w << '\n';
        const GridSpec spec = grid_from(cfg, "/grid");
        auto d = discretize_pings(parsed.rows, spec);
        lp.pings = std::move(d.pings);
        lp.out_of_bounds = d.out_of_bounds;
        lp.width = data_width(spec);
        lp.height = data_height(spec);
    } else {
        throw UsageError("unknown pings format '" + format + "' (grid|geo)");
    }
    return lp;
}

std::size_t distinct_users(const std::vector<PingRecord>& pings) {
    std::set<std::int64_t> ids;
    for (const auto& p : pings) ids.insert(p.uid);
    return ids.size();
}

ActivityRaster load_count_raster(const RunConfig& cfg, std::ostream& err) {
    if (cfg.has("/raster")) {
        auto in = open_in(cfg.path("/raster"));
        return read_count_raster_csv(in);
    }
    const LoadedPings lp = load_pings(cfg, err);
    const std::string mode = cfg.get<std::string>("/count_mode", "records");
    return accumulate(lp.pings, lp.width, lp.height, mode == "users" ? CountMode::unique_users : CountMode::records);
}

// Binary template from the configured source and threshold rule.
BinaryImage build_template(const RunConfig& cfg, std::ostream& err) {
    if (cfg.has("/template")) {
        auto in = open_in(cfg.path("/template"));
        return read_binary_pgm(in);
    }
    const std::string mode = cfg.get<std::string>("/threshold_mode", "count");
    const int block = cfg.get<int>("/block", 1);
    if (mode == "real") {
        auto in = open_in(cfg.path("/raster"));
        RealRaster r = read_raster_csv(in);
        if (block > 1) r = block_aggregate(r, block);
        return threshold_real(r, cfg.at("/threshold").get<double>());
    }
    ActivityRaster r = load_count_raster(cfg, err);
    if (block > 1) r = block_aggregate(r, block);
    if (mode == "nonzero") return threshold_nonzero(r);
    if (mode != "count") throw UsageError("threshold_mode must be count, nonzero or real");
    return threshold(r, cfg.at("/threshold").get<std::int64_t>());
}

BBox bbox_from(const RunConfig& cfg) { return cfg.at("/bbox").get<BBox>(); }

ProjectionRef ref_from(const RunConfig& cfg, const BBox& bbox) {
    ProjectionRef ref = projection_for(bbox);
    ref.ref_lat = cfg.get<double>("/ref_lat", ref.ref_lat);
    return ref;
}

LandMask build_background(const RunConfig& cfg) {
    const BBox bbox = bbox_from(cfg);
    const double pixel = cfg.at("/pixel_size_m").get<double>();
    const ProjectionRef ref = ref_from(cfg, bbox);
    if (cfg.has("/background")) {
        auto in = open_in(cfg.path("/background"));
        return LandMask{read_binary_pgm(in), bbox, pixel, ref};
    }
    auto in = open_in(cfg.path("/polygons"));
    const auto polys = parse_polygons(in, cfg.get<std::string>("/name_property", "name"));
    return rasterize_polygons(polys, bbox, pixel, ref);
}

SearchOptions search_from(const RunConfig& cfg) {
    SearchOptions opt;
    opt.scales = scale_grid(cfg.get<double>("/search/scale_min", 0.85), cfg.get<double>("/search/scale_max", 1.15),
                            cfg.get<double>("/search/scale_step", 0.05));
    if (cfg.has("/search/dihedrals")) {
        opt.dihedrals.clear();
        for (const json& d : cfg.at("/search/dihedrals")) {
            auto e = dihedral_from_string(d.get<std::string>());
            if (!e) throw UsageError("unknown dihedral element " + d.dump());
            opt.dihedrals.push_back(*e);
        }
    }
    auto method = score_method_from_string(cfg.get<std::string>("/method", "hamming"));
    if (!method) throw UsageError("method must be hamming, jaccard or zncc");
    opt.method = *method;
    opt.refine = cfg.get<bool>("/search/refine", false);
    opt.refine_step = cfg.get<double>("/search/refine_step", 0.01);
    opt.threads = cfg.threads;
    return opt;
}

// Emits grid.json and grid.geojson, attaching activity attributes when pings are configured.
void emit_grid(const RunConfig& cfg, const GridSpec& spec, const TransformedMatch& match, const BBox& bbox,
               double pixel, std::ostream& err) {
    GeoreferencedGrid grid;
    grid.spec = spec;
    grid.match = match;
    grid.background_bbox = bbox;
    grid.pixel_size_m = pixel;
    if (cfg.has("/pings/path") && cfg.get<int>("/block", 1) == 1) {
        const LoadedPings lp = load_pings(cfg, err);
        if (lp.width == data_width(spec) && lp.height == data_height(spec)) {
            grid.activity = accumulate(lp.pings, lp.width, lp.height, CountMode::records);
            grid.users = accumulate(lp.pings, lp.width, lp.height, CountMode::unique_users);
        } else {
            err << "warning: ping grid dimensions differ from the located grid; attributes omitted\n";
        }
    }
    json spec_doc = spec;
    write_json(cfg, "grid.json", spec_doc);
    json geo = grid_to_geojson(grid);
    geo["provenance"]["config_sha256"] = cfg.digest;
    geo["provenance"]["seed"] = cfg.seed;
    open_out(cfg, "grid.geojson") << geo.dump() << '\n';
}

}  // namespace

int cmd_rasterize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const LoadedPings lp = load_pings(cfg, err);
    if (lp.pings.empty()) err << "warning: no pings in input; rasters are all zero\n";
    const ActivityRaster records = accumulate(lp.pings, lp.width, lp.height, CountMode::records);
    const ActivityRaster users = accumulate(lp.pings, lp.width, lp.height, CountMode::unique_users);
    {
        auto o = csv_out(cfg, "activity_records.csv");
        write_raster_csv(o, records);
    }
    {
        auto o = csv_out(cfg, "unique_users.csv");
        write_raster_csv(o, users);
    }
    write_gray(cfg, "activity_records.pgm", stretch_to_gray(log_view(records)));
    write_gray(cfg, "unique_users.pgm", stretch_to_gray(log_view(users)));
    const std::size_t n_users = distinct_users(lp.pings);
    write_json(cfg, "rasterize.json",
               {{"records", records.sum()}, {"users", n_users}, {"width", lp.width}, {"height", lp.height},
                {"out_of_bounds", lp.out_of_bounds}, {"rejected_rows", lp.rejected}});
    out << "records " << records.sum() << "\nusers " << n_users << "\ngrid " << lp.width << "x" << lp.height << '\n';
    return 0;
}

int cmd_threshold(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const BinaryImage t = build_template(cfg, err);
    write_bits(cfg, "template.pgm", t);
    out << "template " << t.cols() << "x" << t.rows() << " active " << t.count() << '\n';
    return 0;
}

int cmd_landmask(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const LandMask mask = build_background(cfg);
    write_bits(cfg, "landmask.pgm", mask.bits);
    write_json(cfg, "landmask.json",
               {{"bbox", mask.bbox}, {"pixel_size_m", mask.pixel_size_m}, {"projection", mask.ref},
                {"width", mask.bits.cols()}, {"height", mask.bits.rows()}});
    out << "landmask " << mask.bits.cols() << "x" << mask.bits.rows() << " land " << mask.bits.count() << '\n';
    return 0;
}

int cmd_rescale(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const int k = cfg.at("/block").get<int>();
    const ActivityRaster r = block_aggregate(load_count_raster(cfg, err), k);
    {
        auto o = csv_out(cfg, "rescaled.csv");
        write_raster_csv(o, r);
    }
    write_gray(cfg, "rescaled.pgm", stretch_to_gray(log_view(r)));
    out << "rescaled " << r.cols() << "x" << r.rows() << " total " << r.sum() << '\n';
    return 0;
}

int cmd_locate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const BinaryImage templ = build_template(cfg, err);
    if (templ.count() == 0) throw Error("template has no active cells; lower the threshold");
    const LandMask bg = build_background(cfg);
    write_bits(cfg, "template.pgm", templ);
    write_bits(cfg, "background.pgm", bg.bits);

    const TransformedMatch match = search_transforms(bg.bits, templ, search_from(cfg));
    const GridSpec spec = anchor_from_match(match, bg.bbox, bg.pixel_size_m, bg.ref);
    json match_doc = match;
    match_doc["background_bbox"] = bg.bbox;
    match_doc["pixel_size_m"] = bg.pixel_size_m;
    match_doc["projection"] = bg.ref;
    write_json(cfg, "match.json", match_doc);
    emit_grid(cfg, spec, match, bg.bbox, bg.pixel_size_m, err);

    out << "offset " << match.match.offset_x << "," << match.match.offset_y << " score " << match.match.score
        << " dihedral " << to_string(match.dihedral) << " scale " << match.scale_x << "," << match.scale_y << '\n'
        << "anchor " << std::setprecision(10) << spec.anchor_lat << "," << spec.anchor_lon << '\n';
    return 0;
}

int cmd_georef(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto in = open_in(cfg.path("/match"));
    const json doc = json::parse(in);
    const TransformedMatch match = doc.get<TransformedMatch>();
    const BBox bbox = cfg.has("/bbox") ? bbox_from(cfg) : doc.at("background_bbox").get<BBox>();
    const double pixel = cfg.has("/pixel_size_m") ? cfg.at("/pixel_size_m").get<double>()
                                                   : doc.at("pixel_size_m").get<double>();
    ProjectionRef ref = doc.contains("projection") && !cfg.has("/bbox") ? doc["projection"].get<ProjectionRef>()
                                                                          : ref_from(cfg, bbox);
    const GridSpec spec = anchor_from_match(match, bbox, pixel, ref);
    emit_grid(cfg, spec, match, bbox, pixel, err);
    out << "anchor " << std::setprecision(10) << spec.anchor_lat << "," << spec.anchor_lon << '\n';
    return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    json spec_doc;
    {
        auto in = open_in(cfg.path("/grid_spec"));
        spec_doc = json::parse(in);
    }
    if (cfg.has("/grid_spec_overrides")) spec_doc.merge_patch(cfg.at("/grid_spec_overrides"));
    const GridSpec spec = spec_doc.get<GridSpec>();

    const LoadedPings lp = load_pings(cfg, err);
    NightWindow night = default_night_window();
    if (cfg.has("/night_slots")) {
        night.reset();
        for (const json& s : cfg.at("/night_slots")) night.set(s.get<std::size_t>());
    }
    const auto homes = detect_homes(lp.pings, night, cfg.threads);
    {
        auto o = csv_out(cfg, "homes.csv");
        csv::write_row(o, {"uid", "x", "y", "count"});
        for (const auto& h : homes)
            csv::write_row(o, {std::to_string(h.uid), std::to_string(h.cell.x), std::to_string(h.cell.y),
                               std::to_string(h.night_pings)});
    }

    struct Level {
        std::string name;
        fs::path regions, census;
        std::string name_property;
    };
    std::vector<Level> levels;
    auto resolve = [&](const std::string& p) {
        fs::path v = p;
        return v.is_absolute() ? v : cfg.base_dir / v;
    };
    if (cfg.has("/levels")) {
        for (const json& l : cfg.at("/levels"))
            levels.push_back({l.value("name", "level" + std::to_string(levels.size())), resolve(l.at("regions")),
                              resolve(l.at("census")), l.value("name_property", "name")});
    } else {
        levels.push_back({"regions", cfg.path("/regions"), cfg.path("/census"),
                          cfg.get<std::string>("/name_property", "name")});
    }

    const double coverage_min = cfg.get<double>("/coverage_min", 0.3);
    json report = {{"homes", homes.size()}, {"levels", json::object()}};
    for (const Level& level : levels) {
        std::vector<NamedPolygon> regions;
        {
            auto in = open_in(level.regions);
            regions = parse_polygons(in, level.name_property);
        }
        std::map<std::string, std::int64_t> census;
        {
            auto in = open_in(level.census);
            for (const auto& row : parse_census(in).rows) census[row.region_name] = row.population;
        }
        const PopulationEstimate est = estimate_population(homes, spec, regions, coverage_min);
        for (const auto& w : est.warnings) err << "warning: " << w << '\n';

        std::vector<double> xs, ys;
        json missing_census = json::array();
        std::set<std::string> seen;
        auto o = csv_out(cfg, "population_" + level.name + ".csv");
        csv::write_row(o, {"region", "estimated", "census"});
        for (const RegionEstimate& r : est.regions) {
            seen.insert(r.name);
            auto it = census.find(r.name);
            if (it == census.end()) {
                missing_census.push_back(r.name);
                continue;
            }
            csv::write_row(o, {r.name, std::to_string(r.estimated), std::to_string(it->second)});
            xs.push_back(static_cast<double>(r.estimated));
            ys.push_back(static_cast<double>(it->second));
        }
        json missing_regions = json::array();
        for (const auto& [name, pop] : census) {
            const bool has_polygon = std::any_of(regions.begin(), regions.end(),
                                                 [&](const NamedPolygon& p) { return p.name == name; });
            if (!has_polygon) missing_regions.push_back(name);
        }
        for (const auto& n : missing_census) err << "warning: region " << n << " has no census row\n";
        for (const auto& n : missing_regions) err << "warning: census row " << n << " has no region polygon\n";

        json entry = {{"regions_compared", xs.size()},
                      {"regions_dropped_by_coverage", regions.size() - est.regions.size()},
                      {"homes_unassigned", est.unassigned},
                      {"missing_census", missing_census},
                      {"missing_regions", missing_regions}};
        try {
            entry["pearson"] = pearson(xs, ys);
            out << level.name << " pearson " << entry["pearson"].get<double>() << " over " << xs.size() << " regions\n";
        } catch (const Error& e) {
            entry["pearson"] = nullptr;
            entry["pearson_error"] = e.what();
            err << "warning: " << level.name << ": " << e.what() << '\n';
        }
        report["levels"][level.name] = entry;
    }
    write_json(cfg, "pearson.json", report);
    return 0;
}

int cmd_identifiability(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const LoadedPings lp = load_pings(cfg, err);
    const auto factors = cfg.get<std::vector<int>>("/factors", {2, 4, 8, 16, 32});
    const IdentifiabilityTable table = identifiability_table(lp.pings, factors, cfg.threads);
    {
        auto o = csv_out(cfg, "identifiability.csv");
        write_identifiability_csv(o, table);
    }
    write_json(cfg, "identifiability.json",
               {{"ranked_users", table.ranked_users}, {"excluded_users", table.excluded_users}, {"factors", factors}});
    out << "distinct";
    for (int f : factors) out << '\t' << "x" << f;
    out << '\n';
    for (int d = 4; d >= 1; --d) {
        out << d;
        for (std::size_t j = 0; j < factors.size(); ++j) out << '\t' << table.at(d, j);
        out << '\n';
    }
    out << "excluded " << table.excluded_users << '\n';
    return 0;
}

int cmd_hex(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const GridSpec spec = grid_from(cfg, "/grid");
    HexSpec hex;
    hex.origin = grid_projection(spec);
    hex.edge_m = cfg.has("/hex/edge_m") ? cfg.at("/hex/edge_m").get<double>()
                                        : hex_edge_for_area(cfg.at("/hex/area_km2").get<double>());

    auto in = open_in(cfg.path("/pings/path"));
    GeoPingLayout layout;
    layout.uid = cfg.get<std::string>("/pings/columns/uid", layout.uid);
    layout.timestamp = cfg.get<std::string>("/pings/columns/timestamp", layout.timestamp);
    layout.lat = cfg.get<std::string>("/pings/columns/lat", layout.lat);
    layout.lon = cfg.get<std::string>("/pings/columns/lon", layout.lon);
    const auto parsed = parse_geo_pings(in, layout, parse_options(cfg));
    for (const auto& w : parsed.warnings) err << "warning: " << w << '\n';

    std::map<std::string, std::int64_t> ids;
    std::vector<ProjectedPing> projected;
    projected.reserve(parsed.rows.size());
    for (const GeoPing& p : parsed.rows) {
        const auto [it, inserted] = ids.try_emplace(p.uid, static_cast<std::int64_t>(ids.size()));
        projected.push_back({it->second, project(p.lat, p.lon, hex.origin)});
    }
    const HexCounts records = hex_aggregate(projected, hex, CountMode::records);
    const HexCounts users = hex_aggregate(projected, hex, CountMode::unique_users);
    {
        auto o = csv_out(cfg, "hex_counts.csv");
        csv::write_row(o, {"q", "r", "records", "users"});
        for (const auto& [h, n] : records)
            csv::write_row(o, {std::to_string(h.q), std::to_string(h.r), std::to_string(n), std::to_string(users.at(h))});
    }
    json geo = hex_to_geojson(records, hex);
    geo["provenance"]["config_sha256"] = cfg.digest;
    geo["provenance"]["seed"] = cfg.seed;
    open_out(cfg, "hex.geojson") << geo.dump() << '\n';

    const double pixel = cfg.get<double>("/hex/pixel_size_m", spec.cell_size_m);
    const auto min_count = cfg.get<std::int64_t>("/hex/min_count", 1);
    const BinaryImage img = hex_rasterize(records, hex, grid_bbox(spec), pixel, min_count);
    write_bits(cfg, "hex.pgm", img);
    out << "hexagons " << records.size() << " edge_m " << hex.edge_m << " raster " << img.cols() << "x" << img.rows()
        << '\n';
    return 0;
}

}  // namespace gridloc::cli
