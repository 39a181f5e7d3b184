#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "breather/closed_forms.hpp"
#include "breather/evolution.hpp"
#include "breather/grid.hpp"

namespace bbench {

/// Malformed or out-of-contract configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A threshold and where its value came from ("default" or "config").
struct Threshold {
    double value = 0.0;
    std::string source = "default";
};

class Tolerances {
public:
    Tolerances();

    double operator[](const std::string& name) const;
    const Threshold& entry(const std::string& name) const;
    const std::map<std::string, Threshold>& all() const noexcept { return entries_; }

    /// Unknown names are rejected so typos do not silently fall back to defaults.
    void override_value(const std::string& name, double value);

private:
    std::map<std::string, Threshold> entries_;
};

struct StabilitySection {
    double eta = 1e-3;
    std::uint64_t seed = 7;
    double k_max = 6.0;
    double t_end = 20.0;
};

struct OutputSection {
    std::size_t snapshot_every = 10;  // keep every n-th recorded snapshot
    std::size_t space_every = 8;      // keep every m-th grid point
};

struct RunConfig {
    double half_width = 30.0;
    std::size_t n_points = 2048;
    mkdv::BreatherParams params;
    mkdv::EvolutionConfig evolution;
    StabilitySection stability;
    OutputSection output;
    std::size_t spectrum_k = 10;
    std::vector<mkdv::BreatherParams> suite_params;  // verify
    std::vector<double> suite_times;
    std::vector<double> soliton_speeds{0.25, 1.0, 4.0};
    double soliton_t_end = 5.0;
    Tolerances tolerances;

    mkdv::GridSpec grid() const { return mkdv::GridSpec::make(half_width, n_points); }
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// The effective configuration, echoed into every report.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace bbench
