#pragma once

#include <functional>

#include "qdrive/domain.hpp"
#include "qdrive/synthesis.hpp"

// Propagation of the amplitude pair under a real drive field, exactly and in
// the rotating-wave approximation, plus the closed-form constant-drive
// solution used as integrator oracle. No renormalization is ever applied
// during propagation; norm drift is the integrator diagnostic.

namespace qdrive {

// A drive known as a real field E(t), optionally also as a complex envelope
// EE(t) with carrier omega such that E(t) = EE(t)e^{-i omega t} + c.c.
struct DriveField {
    std::function<double(double)> field;       // E(t), au
    std::function<complexd(double)> envelope;  // EE(t); empty unless has_envelope
    double carrier = 0.0;                      // omega, au
    bool has_envelope = false;
};

// Both representations of the synthesized resonant pulse (carrier = omega0).
DriveField make_drive(const ControlSpec& spec, const SystemParams& params);

struct Derivs {
    complexd dc1;
    complexd dc2;
};

// Exact equations of motion, written against the real field directly:
//   dc1/dt = i c2 mu E(t) e^{-i w0 t},  dc2/dt = i c1 mu E(t) e^{+i w0 t}.
Derivs rhs_exact(const QuantumState& state, double t, double field, const SystemParams& params);

// RWA equations of motion with complex envelope and detuning delta:
//   dc1/dt = i c2 mu EE*(t) e^{i delta t},  dc2/dt = i c1 mu EE(t) e^{-i delta t}.
Derivs rhs_rwa(const QuantumState& state, double t, complexd env, double delta,
               const SystemParams& params);

enum class Frame { Exact, Rwa };

struct NumericalFailure : std::runtime_error {
    double t;
    explicit NumericalFailure(const std::string& what, double t_fail)
        : std::runtime_error(what), t(t_fail) {}
};

// Propagates initial from t_start to t_end. The adaptive method records on a
// uniform grid of spacing record_stride * 1 au; the fixed-step method records
// every record_stride-th step. reference_f, when supplied, fills the
// trajectory's reference column (NaN otherwise).
Trajectory propagate(const QuantumState& initial, const DriveField& drive, Frame frame,
                     const SystemParams& params, const SimConfig& config,
                     const std::function<double(double)>& reference_f = {});

// Closed-form solution of the RWA equations for constant envelope env0 and
// detuning delta, taken from time 0 to t. Generalized Rabi frequency
// Omega = sqrt(4 mu^2 |env0|^2 + delta^2).
QuantumState rabi_oracle(const QuantumState& initial, complexd env0, double delta,
                         const SystemParams& params, double t);

// max over samples of | |c1|^2 + |c2|^2 - 1 |.
double norm_drift(const Trajectory& traj);

}  // namespace qdrive
