#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

// Core value types for the two-level control library. Atomic units are used
// throughout (hbar = e = m_e = 1); the single femtosecond conversion constant
// below exists for display and cross-checks only.

namespace qdrive {

using complexd = std::complex<double>;

// 1 au of time in femtoseconds.
inline constexpr double kAuTimeFs = 2.4189e-2;

inline constexpr double kPi = 3.14159265358979323846;

// Physical two-level system. Only the level splitting omega0 = e2 - e1 is
// stored; the individual eigenenergies contribute a global phase that drops
// out of every observable handled here.
struct SystemParams {
    double omega0 = 0.0;  // resonance frequency, au of energy
    double mu = 0.0;      // dipole matrix element projected on the field polarization axis, au

    void validate() const {
        if (!(omega0 > 0.0)) throw std::invalid_argument("SystemParams: omega0 must be > 0");
        if (mu == 0.0) throw std::invalid_argument("SystemParams: mu must be nonzero");
    }
};

// Prescribed sigmoid population path: population of |1> goes from a_i to a_f
// with transition rate alpha, at constant relative phase phi between the
// amplitudes.
struct ControlSpec {
    double a_i = 0.0;    // initial population of |1>
    double a_f = 0.0;    // final population of |1>
    double alpha = 0.0;  // transition-rate parameter, au^-1
    double phi = 0.0;    // relative phase phi1 - phi2, rad

    void validate() const {
        if (!(a_i >= 0.0 && a_i <= 1.0)) throw std::invalid_argument("ControlSpec: a_i must be in [0,1]");
        if (!(a_f >= 0.0 && a_f <= 1.0)) throw std::invalid_argument("ControlSpec: a_f must be in [0,1]");
        if (!(alpha > 0.0)) throw std::invalid_argument("ControlSpec: alpha must be > 0");
    }
};

// Interaction-picture amplitude pair (c1, c2).
struct QuantumState {
    complexd c1{0.0, 0.0};
    complexd c2{0.0, 0.0};

    double norm_sq() const { return std::norm(c1) + std::norm(c2); }
};

// Checked constructor for states entering the public API.
inline QuantumState normalized_state(complexd c1, complexd c2) {
    QuantumState s{c1, c2};
    if (std::abs(s.norm_sq() - 1.0) > 1e-12)
        throw std::invalid_argument("QuantumState: |c1|^2 + |c2|^2 must be 1 within 1e-12");
    return s;
}

// Record of one propagation run. All four series share the time grid.
struct Trajectory {
    std::vector<double> times;         // strictly increasing, au
    std::vector<QuantumState> states;
    std::vector<double> field_values;  // E(t) at each sample, au
    std::vector<double> reference_f;   // prescribed f(t); NaN when no reference was supplied

    void validate() const {
        const std::size_t n = times.size();
        if (n < 2) throw std::invalid_argument("Trajectory: need at least 2 samples");
        if (states.size() != n || field_values.size() != n || reference_f.size() != n)
            throw std::invalid_argument("Trajectory: series length mismatch");
        for (std::size_t i = 1; i < n; ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("Trajectory: times must be strictly increasing");
    }
};

enum class Method { FixedRk4, Adaptive45 };

struct SimConfig {
    double t_start = 0.0;
    double t_end = 0.0;
    Method method = Method::Adaptive45;
    double step = 0.0;        // fixed-step size, au; 0 = (2 pi / omega0) / 200
    double rel_tol = 1e-10;   // Adaptive45
    double abs_tol = 1e-12;   // Adaptive45
    int record_stride = 1;    // output decimation factor

    void validate() const {
        if (!(t_start < t_end)) throw std::invalid_argument("SimConfig: t_start must be < t_end");
        if (method == Method::FixedRk4 && step < 0.0)
            throw std::invalid_argument("SimConfig: step must be >= 0 (0 = default)");
        if (method == Method::Adaptive45 && !(rel_tol > 0.0 && abs_tol > 0.0))
            throw std::invalid_argument("SimConfig: tolerances must be > 0");
        if (record_stride < 1) throw std::invalid_argument("SimConfig: record_stride must be >= 1");
    }
};

// Synthesized resonant field: closed-form parameters plus optional samples.
// carrier == omega0 for every pulse produced by the synthesis module.
struct Pulse {
    ControlSpec spec;
    SystemParams params;
    double carrier = 0.0;          // au
    std::vector<double> times;     // sample grid, au (may be empty)
    std::vector<double> field;     // E(t) at samples, au
};

// |c_k|^2 for k = 1 or 2.
double population(const QuantumState& state, int which);

// arg(c1) - arg(c2) wrapped to (-pi, pi]. Throws std::domain_error when either
// modulus is below 1e-12 (phase undefined).
double relative_phase(const QuantumState& state);

// Shortest-arc wrap of an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace qdrive
