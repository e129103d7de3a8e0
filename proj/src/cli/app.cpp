#include "gridloc/cli/app.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "gridloc/error.hpp"

#include <CLI11.hpp>

#include <functional>
#include <map>

namespace gridloc::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using Command = std::function<int(const RunConfig&, std::ostream&, std::ostream&)>;
    const std::map<std::string, std::pair<Command, std::string>> commands = {
        {"rasterize", {cmd_rasterize, "Accumulate pings into record and unique-user rasters"}},
        {"threshold", {cmd_threshold, "Threshold a raster into a binary template"}},
        {"landmask", {cmd_landmask, "Rasterize land polygons over a bounding box"}},
        {"locate", {cmd_locate, "Match the template against the land mask and georeference the grid"}},
        {"georef", {cmd_georef, "Turn a saved match into a grid spec and GeoJSON grid"}},
        {"validate", {cmd_validate, "Detect homes and correlate regional estimates with census counts"}},
        {"identifiability", {cmd_identifiability, "Top-4 location identifiability under coarsening"}},
        {"rescale", {cmd_rescale, "Block-aggregate a raster"}},
        {"hex", {cmd_hex, "Aggregate geographic pings into hexagons"}},
    };

    CLI::App app{"Locate the undisclosed grid of a discretized mobility dataset", "gridloc"};
    app.require_subcommand(1);
    Overrides flags;
    app.add_option("--config", flags.config, "JSON run configuration");
    app.add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", flags.seed, "Seed for randomized steps");
    app.add_option("--out", flags.out, "Output directory");
    app.add_option("--set", flags.sets, "Config override /json/pointer=value (repeatable)");
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.second);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = load_config(flags);
        return commands.at(name).first(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const nlohmann::json::exception& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace gridloc::cli
