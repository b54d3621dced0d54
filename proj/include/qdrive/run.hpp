#pragma once

#include <string>
#include <vector>

#include "qdrive/domain.hpp"

// Run manifests, keyed-text config parsing, CSV/report writers, and the
// command implementations behind the CLI. File schemas:
//   pulse.csv:      t_au, field_au, envelope_au
//   trajectory.csv: t_au, field_au, p1_exact, p2_exact, p1_rwa, p2_rwa, f_ref, relphase_rwa
//   sweep.csv:      alpha, cycles_in_fwhm, final_population_error, tracking_max, status
// Numeric cells carry 17 significant digits; summaries round to 6.

namespace qdrive::io {

enum class FrameChoice { Exact, Rwa, Both };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunManifest {
    ControlSpec spec;
    SystemParams params;
    SimConfig sim;
    FrameChoice frame = FrameChoice::Both;
    std::string out_dir = ".";
    bool timestamp = true;
    bool emit_gnuplot = false;

    void validate() const;  // throws ConfigError
};

// Built-in parameter sets. "fig1": mu=6, omega0=0.02, a_i=0.4, a_f=1, phi=0,
// alpha=0.01, window [-1500, 1500]; "fig2": alpha=0.05, window scaled by
// 1/alpha. Throws ConfigError for any other name.
RunManifest preset_manifest(const std::string& name);

// Applies `key = value` lines (# comments, blank lines allowed) from path.
// Throws ConfigError naming the offending key or line.
void apply_config_file(RunManifest& manifest, const std::string& path);

// Single key=value override (same key set as the config file).
void apply_override(RunManifest& manifest, const std::string& key, const std::string& value);

// Writes <out_dir>/pulse.csv.
void cmd_synthesize(const RunManifest& manifest);

// Writes <out_dir>/trajectory.csv and <out_dir>/summary.txt.
void cmd_propagate(const RunManifest& manifest);

// Writes <out_dir>/sweep.csv, one row per alpha; rows run concurrently and a
// failing row is recorded in its status cell without affecting the others.
void cmd_sweep(const RunManifest& manifest, const std::vector<double>& alphas);

}  // namespace qdrive::io
