#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gridloc::cli {

/// Raised for invalid invocations and configs (exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// JSON run configuration after flag overrides. Relative paths resolve
/// against the directory of the config file.
struct RunConfig {
    nlohmann::json doc = nlohmann::json::object();
    std::filesystem::path base_dir = ".";
    std::filesystem::path out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 0;
    /// SHA-256 of the canonical config without worker count and output dir.
    std::string digest;

    bool has(const std::string& pointer) const;
    const nlohmann::json& at(const std::string& pointer) const;
    template <typename T>
    T get(const std::string& pointer, T fallback) const {
        return has(pointer) ? at(pointer).get<T>() : fallback;
    }
    std::filesystem::path path(const std::string& pointer) const;
    std::filesystem::path output(const std::string& name) const { return out_dir / name; }

    /// One-line provenance stamp embedded in every output file.
    std::string stamp() const;
};

struct Overrides {
    std::optional<std::string> config;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<std::string> sets;  ///< "json/pointer=value"
};

RunConfig load_config(const Overrides& flags);

std::string sha256_hex(const std::string& data);

}  // namespace gridloc::cli
