#include "config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace gridloc::cli {

using nlohmann::json;

namespace {

// Keys whose values name input files that must exist.
const char* const kPathKeys[] = {"/pings/path", "/raster", "/template", "/polygons", "/background",
                                 "/match", "/grid_spec", "/regions", "/census"};

json::json_pointer pointer(const std::string& p) {
    try {
        return json::json_pointer(p);
    } catch (const json::exception& e) {
        throw UsageError("bad config key '" + p + "': " + e.what());
    }
}

}  // namespace

bool RunConfig::has(const std::string& p) const { return doc.contains(pointer(p)); }

const json& RunConfig::at(const std::string& p) const {
    if (!has(p)) throw UsageError("config is missing '" + p + "'");
    return doc.at(pointer(p));
}

std::filesystem::path RunConfig::path(const std::string& p) const {
    std::filesystem::path v = at(p).get<std::string>();
    return v.is_absolute() ? v : base_dir / v;
}

std::string RunConfig::stamp() const {
    return "config_sha256=" + digest + " seed=" + std::to_string(seed);
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

RunConfig load_config(const Overrides& flags) {
    RunConfig cfg;
    if (flags.config) {
        std::ifstream in(*flags.config);
        if (!in) throw UsageError("cannot open config '" + *flags.config + "'");
        try {
            cfg.doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError("config '" + *flags.config + "' is not valid JSON: " + e.what());
        }
        if (!cfg.doc.is_object()) throw UsageError("config root must be a JSON object");
        cfg.base_dir = std::filesystem::path(*flags.config).parent_path();
        if (cfg.base_dir.empty()) cfg.base_dir = ".";
    }

    for (const std::string& s : flags.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects /json/pointer=value, got '" + s + "'");
        const std::string key = s.substr(0, eq), raw = s.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;  // bare strings need no quoting
        }
        cfg.doc[pointer(key.front() == '/' ? key : "/" + key)] = value;
    }
    if (flags.threads) cfg.doc["threads"] = *flags.threads;
    if (flags.seed) cfg.doc["seed"] = *flags.seed;
    if (flags.out) cfg.doc["out"] = *flags.out;

    cfg.threads = cfg.doc.value("threads", 1);
    if (cfg.threads < 1) throw UsageError("threads must be >= 1");
    cfg.seed = cfg.doc.value("seed", std::uint64_t{0});
    cfg.doc["seed"] = cfg.seed;
    if (cfg.doc.contains("out")) {
        std::filesystem::path out = cfg.doc["out"].get<std::string>();
        cfg.out_dir = out.is_absolute() || flags.out ? out : cfg.base_dir / out;
    }

    for (const char* key : kPathKeys) {
        if (cfg.has(key) && !std::filesystem::exists(cfg.path(key)))
            throw UsageError(std::string("config '") + key + "' names a missing file: " + cfg.path(key).string());
    }
    if (cfg.has("/levels")) {
        for (const json& level : cfg.at("/levels")) {
            for (const char* key : {"regions", "census"}) {
                if (!level.contains(key)) throw UsageError(std::string("every level needs '") + key + "'");
                std::filesystem::path p = level[key].get<std::string>();
                if (!p.is_absolute()) p = cfg.base_dir / p;
                if (!std::filesystem::exists(p)) throw UsageError("level file missing: " + p.string());
            }
        }
    }

    json canonical = cfg.doc;
    canonical.erase("threads");
    canonical.erase("out");
    cfg.digest = sha256_hex(canonical.dump());
    return cfg;
}

}  // namespace gridloc::cli
