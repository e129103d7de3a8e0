// Writes a synthetic coastline world with known grid placement.
#include "gridloc/csv.hpp"
#include "gridloc/json_io.hpp"
#include "gridloc/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json polygons_to_geojson(const std::vector<gridloc::NamedPolygon>& polys) {
    json features = json::array();
    for (const auto& p : polys) {
        json parts = json::array();
        for (const auto& part : p.parts) {
            json rings = json::array();
            for (const auto& ring : part) {
                json coords = json::array();
                for (const auto& v : ring) coords.push_back({v.x(), v.y()});
                rings.push_back(coords);
            }
            parts.push_back(rings);
        }
        features.push_back({{"type", "Feature"},
                            {"properties", {{"name", p.name}}},
                            {"geometry", {{"type", "MultiPolygon"}, {"coordinates", parts}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
}

void save(const fs::path& p, const json& j) {
    std::ofstream(p) << j.dump(1) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic fixture"};
    std::string out = "fixtures/synthetic";
    gridloc::SyntheticConfig cfg;
    cfg.with_regions = true;
    app.add_option("--out", out);
    app.add_option("--seed", cfg.seed);
    app.add_option("--pings", cfg.pings);
    CLI11_PARSE(app, argc, argv);

    const gridloc::SyntheticWorld world = gridloc::generate_world(cfg);
    const fs::path dir = out;
    fs::create_directories(dir);

    save(dir / "land.geojson", polygons_to_geojson(world.land));
    save(dir / "regions.geojson", polygons_to_geojson(world.regions));
    {
        std::ofstream o(dir / "pings.csv");
        gridloc::write_grid_pings(o, world.pings);
    }
    {
        std::ofstream o(dir / "census.csv");
        gridloc::csv::write_row(o, {"region", "population"});
        for (const auto& c : world.census) gridloc::csv::write_row(o, {c.region_name, std::to_string(c.population)});
    }
    json truth = world.truth;
    truth["data_transform"] = std::string(gridloc::to_string(world.data_transform));
    truth["seed"] = cfg.seed;
    save(dir / "truth.json", truth);

    const json pings = {{"path", "pings.csv"}, {"format", "grid"}, {"width", cfg.grid_cells}, {"height", cfg.grid_cells}};
    save(dir / "locate.json", {{"pings", pings},
                               {"threshold", 2},
                               {"threshold_mode", "count"},
                               {"polygons", "land.geojson"},
                               {"bbox", world.bbox},
                               {"pixel_size_m", cfg.pixel_size_m},
                               {"method", "hamming"},
                               {"seed", cfg.seed},
                               {"out", "out"}});
    save(dir / "validate.json", {{"pings", pings},
                                 {"grid_spec", "out/grid.json"},
                                 {"regions", "regions.geojson"},
                                 {"census", "census.csv"},
                                 {"coverage_min", 0.3},
                                 {"seed", cfg.seed},
                                 {"out", "out"}});
    std::cout << "wrote " << dir.string() << " (" << world.pings.size() << " pings)\n";
    return 0;
}
