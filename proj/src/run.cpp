#include "qdrive/run.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "qdrive/analysis.hpp"
#include "qdrive/dynamics.hpp"
#include "qdrive/synthesis.hpp"

namespace qdrive::io {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::ofstream open_out(const RunManifest& m, const std::string& name) {
    fs::create_directories(m.out_dir);
    const fs::path p = fs::path(m.out_dir) / name;
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write " + p.string());
    if (m.timestamp) {
        const std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
        out << "# generated " << buf << "Z\n";
    }
    return out;
}

std::vector<double> output_grid(const SimConfig& sim) {
    std::vector<double> grid;
    const double dt = 1.0 * sim.record_stride;
    for (double t = sim.t_start; t < sim.t_end - 1e-9; t += dt) grid.push_back(t);
    grid.push_back(sim.t_end);
    return grid;
}

void write_gnuplot(const RunManifest& m) {
    std::ofstream out(fs::path(m.out_dir) / "plot.gp");
    out << "set datafile separator ','\n"
           "set multiplot layout 2,1\n"
           "set xlabel 't (au)'\n"
           "set ylabel 'E(t) (au)'\n"
           "plot 'pulse.csv' using 1:2 with lines title 'field', \\\n"
           "     'pulse.csv' using 1:3 with lines title 'envelope'\n"
           "set ylabel 'population'\n"
           "plot 'trajectory.csv' using 1:3 with lines title 'P1 exact', \\\n"
           "     'trajectory.csv' using 1:4 with lines title 'P2 exact', \\\n"
           "     'trajectory.csv' using 1:7 with lines title 'f(t)'\n"
           "unset multiplot\n";
}

}  // namespace

void RunManifest::validate() const {
    try {
        spec.validate();
        params.validate();
        sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

RunManifest preset_manifest(const std::string& name) {
    RunManifest m;
    m.params = {0.02, 6.0};
    m.spec = {0.4, 1.0, 0.01, 0.0};
    m.sim.t_start = -1500.0;
    m.sim.t_end = 1500.0;
    if (name == "fig2") {
        m.spec.alpha = 0.05;
        m.sim.t_start = -300.0;
        m.sim.t_end = 300.0;
    } else if (name != "fig1") {
        throw ConfigError("unknown preset '" + name + "' (expected fig1 or fig2)");
    }
    return m;
}

void apply_override(RunManifest& m, const std::string& key, const std::string& value) {
    if (key == "a_i") m.spec.a_i = parse_double(key, value);
    else if (key == "a_f") m.spec.a_f = parse_double(key, value);
    else if (key == "alpha") m.spec.alpha = parse_double(key, value);
    else if (key == "phi") m.spec.phi = parse_double(key, value);
    else if (key == "omega0") m.params.omega0 = parse_double(key, value);
    else if (key == "mu") m.params.mu = parse_double(key, value);
    else if (key == "t_start") m.sim.t_start = parse_double(key, value);
    else if (key == "t_end") m.sim.t_end = parse_double(key, value);
    else if (key == "step") m.sim.step = parse_double(key, value);
    else if (key == "rel_tol") m.sim.rel_tol = parse_double(key, value);
    else if (key == "abs_tol") m.sim.abs_tol = parse_double(key, value);
    else if (key == "record_stride") m.sim.record_stride = static_cast<int>(parse_double(key, value));
    else if (key == "method") {
        if (value == "rk4") m.sim.method = Method::FixedRk4;
        else if (value == "adaptive") m.sim.method = Method::Adaptive45;
        else throw ConfigError("config key 'method': expected rk4 or adaptive, got '" + value + "'");
    } else if (key == "frame") {
        if (value == "exact") m.frame = FrameChoice::Exact;
        else if (value == "rwa") m.frame = FrameChoice::Rwa;
        else if (value == "both") m.frame = FrameChoice::Both;
        else throw ConfigError("config key 'frame': expected exact, rwa or both, got '" + value + "'");
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_config_file(RunManifest& m, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        apply_override(m, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void cmd_synthesize(const RunManifest& m) {
    m.validate();
    const Pulse pulse = sample_pulse(m.spec, m.params, output_grid(m.sim));
    std::ofstream out = open_out(m, "pulse.csv");
    out << "t_au,field_au,envelope_au\n";
    for (std::size_t i = 0; i < pulse.times.size(); ++i)
        out << fmt17(pulse.times[i]) << ',' << fmt17(pulse.field[i]) << ','
            << fmt17(envelope(m.spec, m.params, pulse.times[i])) << '\n';
    if (m.emit_gnuplot) write_gnuplot(m);
}

void cmd_propagate(const RunManifest& m) {
    m.validate();
    const bool want_exact = m.frame != FrameChoice::Rwa;
    const bool want_rwa = m.frame != FrameChoice::Exact;

    const DriveField drive = make_drive(m.spec, m.params);
    const QuantumState init = initial_state(m.spec, m.sim.t_start);
    const auto ref = [spec = m.spec](double t) { return control_function(t, spec).f; };

    Trajectory exact, rwa;
    if (want_exact) exact = propagate(init, drive, Frame::Exact, m.params, m.sim, ref);
    if (want_rwa) rwa = propagate(init, drive, Frame::Rwa, m.params, m.sim, ref);
    const Trajectory& lead = want_exact ? exact : rwa;

    std::ofstream out = open_out(m, "trajectory.csv");
    out << "t_au,field_au,p1_exact,p2_exact,p1_rwa,p2_rwa,f_ref,relphase_rwa\n";
    for (std::size_t i = 0; i < lead.times.size(); ++i) {
        out << fmt17(lead.times[i]) << ',' << fmt17(lead.field_values[i]) << ',';
        if (want_exact)
            out << fmt17(population(exact.states[i], 1)) << ','
                << fmt17(population(exact.states[i], 2));
        else
            out << ',';
        out << ',';
        if (want_rwa)
            out << fmt17(population(rwa.states[i], 1)) << ','
                << fmt17(population(rwa.states[i], 2));
        else
            out << ',';
        out << ',' << fmt17(lead.reference_f[i]) << ',';
        if (want_rwa && std::abs(rwa.states[i].c1) >= 1e-12 && std::abs(rwa.states[i].c2) >= 1e-12)
            out << fmt17(relative_phase(rwa.states[i]));
        out << '\n';
    }

    if (want_exact && want_rwa) {
        std::ofstream diff = open_out(m, "difference.csv");
        diff << "t_au,p1_exact_minus_rwa,p2_exact_minus_rwa\n";
        for (std::size_t i = 0; i < exact.times.size(); ++i)
            diff << fmt17(exact.times[i]) << ','
                 << fmt17(population(exact.states[i], 1) - population(rwa.states[i], 1)) << ','
                 << fmt17(population(exact.states[i], 2) - population(rwa.states[i], 2)) << '\n';
    }

    std::ofstream sum = open_out(m, "summary.txt");
    auto report = [&](const std::string& tag, const Trajectory& traj) {
        const TrackingError te = tracking_error(traj);
        sum << "final_p1_" << tag << " = " << fmt6(population(traj.states.back(), 1)) << '\n'
            << "final_p2_" << tag << " = " << fmt6(population(traj.states.back(), 2)) << '\n'
            << "final_population_error_" << tag << " = "
            << fmt6(final_population_error(traj, m.spec.a_f)) << '\n'
            << "tracking_max_" << tag << " = " << fmt6(te.max_abs) << '\n'
            << "tracking_l2_" << tag << " = " << fmt6(te.l2) << '\n'
            << "norm_drift_" << tag << " = " << fmt6(norm_drift(traj)) << '\n';
    };
    if (want_exact) report("exact", exact);
    if (want_rwa) report("rwa", rwa);
    if (want_exact && want_rwa) {
        double max_diff = 0.0;
        for (std::size_t i = 0; i < exact.states.size(); ++i)
            max_diff = std::max(max_diff, std::abs(population(exact.states[i], 1) -
                                                   population(rwa.states[i], 1)));
        sum << "max_p1_diff_exact_rwa = " << fmt6(max_diff) << '\n';
    }
    if (m.spec.a_i != m.spec.a_f) {
        const PulseMetrics pm = pulse_metrics(m.spec, m.params);
        sum << "peak_amplitude_au = " << fmt6(pm.peak_amplitude) << '\n'
            << "fwhm_au = " << fmt6(pm.fwhm) << '\n'
            << "cycles_in_fwhm = " << fmt6(pm.cycles_in_fwhm) << '\n';
    }
    sum << "period_fs = " << fmt6(period_crosscheck(m.params)) << '\n';
    if (m.emit_gnuplot) write_gnuplot(m);
}

void cmd_sweep(const RunManifest& m, const std::vector<double>& alphas) {
    m.validate();
    for (double a : alphas)
        if (!(a > 0.0)) throw ConfigError("sweep: every alpha must be > 0");

    struct Row {
        double alpha, cycles, pop_err, track_max;
        std::string status;
    };
    auto run_one = [&m](double alpha) -> Row {
        Row row{alpha, std::nan(""), std::nan(""), std::nan(""), "ok"};
        try {
            RunManifest r = m;
            r.spec.alpha = alpha;
            // Window scales as 1/alpha so the residual sigmoid tails match.
            const double half_window = 15.0 / alpha;
            r.sim.t_start = -half_window;
            r.sim.t_end = half_window;
            const DriveField drive = make_drive(r.spec, r.params);
            const QuantumState init = initial_state(r.spec, r.sim.t_start);
            const auto ref = [spec = r.spec](double t) { return control_function(t, spec).f; };
            const Trajectory traj = propagate(init, drive, Frame::Exact, r.params, r.sim, ref);
            row.cycles = pulse_metrics(r.spec, r.params).cycles_in_fwhm;
            row.pop_err = final_population_error(traj, r.spec.a_f);
            row.track_max = tracking_error(traj).max_abs;
        } catch (const std::exception& e) {
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            row.status = msg;
        }
        return row;
    };

    std::vector<std::future<Row>> futures;
    futures.reserve(alphas.size());
    for (double a : alphas) futures.push_back(std::async(std::launch::async, run_one, a));

    std::ofstream out = open_out(m, "sweep.csv");
    out << "alpha,cycles_in_fwhm,final_population_error,tracking_max,status\n";
    for (auto& f : futures) {
        const Row r = f.get();
        out << fmt17(r.alpha) << ',' << fmt17(r.cycles) << ',' << fmt17(r.pop_err) << ','
            << fmt17(r.track_max) << ',' << r.status << '\n';
    }
}

}  // namespace qdrive::io
