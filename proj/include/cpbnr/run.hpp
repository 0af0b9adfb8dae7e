// run.hpp -- scenario configuration, presets, file output, and sweeps.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpbnr/dynamics.hpp"
#include "cpbnr/model.hpp"
#include "cpbnr/state.hpp"

namespace cpbnr {

enum class OutputFormat { csv, jsonl };

// Everything needed to produce one trajectory file.
struct RunConfig {
    ModelParams params;
    CoherentSpec initial;
    std::size_t n_max = 0; // 0 = pick automatically from the initial state
    IntegrationPlan plan;
    bool normalize_entropy = true;
    std::string output_path = "trajectory.csv";
    OutputFormat format = OutputFormat::csv;

    void validate() const;
    std::size_t resolved_n_max() const;
};

struct SweepSpec {
    RunConfig base;
    std::string axis; // gamma | delta | eta | omegaPrime | Delta | meanN
    std::vector<double> values;
    std::string out_dir = "sweep";
    unsigned jobs = 0; // 0 = hardware concurrency
};

struct SweepPointResult {
    double value = 0.0;
    std::string file;
    bool ok = false;
    std::string error;
};

struct Preset {
    std::string name;
    std::string summary;
    RunConfig config;
};

// ---- configuration -------------------------------------------------------

// Parses the `key = value` format; `name` labels error messages.
RunConfig parse_config(std::istream& in, const std::string& name);

// Reads and parses a config file; ParseError if it cannot be opened.
RunConfig load_config(const std::string& path);

// Canonical text form of the physics content (used for hashing and echo).
std::string canonical_config_text(const RunConfig& cfg);

// FNV-1a 64-bit hash of canonical_config_text.
std::uint64_t config_hash(const RunConfig& cfg);

// ---- presets ---------------------------------------------------------------

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);
std::string format_presets_listing();

// Copies a preset when `arg` names one, otherwise loads it as a file path.
RunConfig resolve_run_input(const std::string& arg);

// ---- execution -------------------------------------------------------------

// Integrates the scenario and writes the output file; returns the trajectory.
Trajectory run_scenario(const RunConfig& cfg);

void write_rows(std::ostream& out, const std::vector<ObservableRow>& rows, OutputFormat format);

// Returns the base config with the sweep axis set to `value`.
RunConfig apply_axis(const RunConfig& base, const std::string& axis, double value);

// Runs every point (concurrently), writes per-point files plus manifest.json
// in spec.out_dir, and returns per-point results in input order.
std::vector<SweepPointResult> run_sweep(const SweepSpec& spec);

} // namespace cpbnr
