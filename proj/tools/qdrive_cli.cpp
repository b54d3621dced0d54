// qdrive: synthesize resonant control pulses for a two-level system from a
// prescribed population path, and propagate the exact / RWA dynamics.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdrive/dynamics.hpp"
#include "qdrive/run.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out_dir = ".";
    std::string frame = "both";
    bool no_timestamp = false;
    bool emit_gnuplot = false;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "keyed-text config file (key = value lines)");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--frame", o.frame, "propagation frame: exact|rwa|both")
        ->check(CLI::IsMember({"exact", "rwa", "both"}));
    cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp header line");
    cmd->add_flag("--emit-gnuplot", o.emit_gnuplot, "also write a gnuplot script");
    cmd->add_option("--set", o.sets, "override a config key, e.g. --set alpha=0.02");
}

qdrive::io::RunManifest build_manifest(const CommonOpts& o, const std::string& preset) {
    qdrive::io::RunManifest m = qdrive::io::preset_manifest(preset);
    if (!o.config.empty()) qdrive::io::apply_config_file(m, o.config);
    for (const std::string& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw qdrive::io::ConfigError("--set expects key=value, got '" + kv + "'");
        qdrive::io::apply_override(m, kv.substr(0, eq), kv.substr(eq + 1));
    }
    qdrive::io::apply_override(m, "frame", o.frame);
    m.out_dir = o.out_dir;
    m.timestamp = !o.no_timestamp;
    m.emit_gnuplot = o.emit_gnuplot;
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonant pulse synthesis and two-level propagation"};
    app.require_subcommand(1);

    CommonOpts synth_o, prop_o, sweep_o, preset_o;
    std::vector<double> alphas;
    std::string preset_name;

    CLI::App* synth = app.add_subcommand("synthesize", "write the pulse samples as CSV");
    add_common(synth, synth_o);

    CLI::App* prop = app.add_subcommand("propagate", "propagate and write trajectory + summary");
    add_common(prop, prop_o);

    CLI::App* sweep = app.add_subcommand("sweep", "run one exact propagation per alpha");
    add_common(sweep, sweep_o);
    sweep->add_option("--alphas", alphas, "transition-rate values")->required();

    CLI::App* preset = app.add_subcommand("preset", "run synthesize + propagate for fig1 or fig2");
    add_common(preset, preset_o);
    preset->add_option("name", preset_name, "fig1 or fig2")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            qdrive::io::cmd_synthesize(build_manifest(synth_o, "fig1"));
        } else if (prop->parsed()) {
            qdrive::io::cmd_propagate(build_manifest(prop_o, "fig1"));
        } else if (sweep->parsed()) {
            qdrive::io::cmd_sweep(build_manifest(sweep_o, "fig1"), alphas);
        } else if (preset->parsed()) {
            const qdrive::io::RunManifest m = build_manifest(preset_o, preset_name);
            qdrive::io::cmd_synthesize(m);
            qdrive::io::cmd_propagate(m);
        }
    } catch (const qdrive::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const qdrive::io::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
