#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qdrive/domain.hpp"

// Reverse-engineering of the resonant control field from a prescribed
// population path f(t): the generic inversion formula
//
//   E(t) = (1/mu) * fdot / sqrt(f(1-f)) * sin(omega0*t + phi)
//
// and its closed form for the sigmoid family
//
//   f(t) = a_i*(1 - g(t)) + a_f*g(t),   g(t) = 1/(1 + e^{-alpha t}).

namespace qdrive {

struct ControlValue {
    double f;     // population of |1> prescribed at t
    double fdot;  // time derivative, au^-1
};

// Logistic sigmoid, overflow-safe for any alpha*t.
double sigmoid(double t, double alpha);

// f and fdot of the sigmoid path.
ControlValue control_function(double t, const ControlSpec& spec);

// A user-supplied smooth population path: f, fdot, and the declared
// asymptotic limits. When the path reaches a pure state only asymptotically,
// prefactor_limit declares the finite limit of fdot/sqrt(f(1-f)) there
// (0 for the sigmoid family); without it the generic synthesizer refuses
// points where f(1-f) underflows.
struct ControlEvaluator {
    std::function<double(double)> f;
    std::function<double(double)> fdot;
    double f_minus_inf = 0.0;
    double f_plus_inf = 1.0;
    std::optional<double> prefactor_limit;

    // Spot-checks 0 <= f <= 1 and fdot against a central difference on a
    // 10^4-point probe grid spanning [t_lo, t_hi]. Throws on violation.
    void validate(double t_lo, double t_hi) const;
};

// Evaluator for the sigmoid family of a given spec, probe window included.
ControlEvaluator sigmoid_evaluator(const ControlSpec& spec);

// Generic field inversion. Throws std::domain_error when f(1-f) < 1e-30 and
// the evaluator declares no finite prefactor limit.
double synthesize_field_generic(const ControlEvaluator& eval, const SystemParams& params,
                                double phi, double t);

// Closed-form sigmoid pulse, finite for all t including a_f in {0,1}.
double synthesize_field_closed(const ControlSpec& spec, const SystemParams& params, double t);

// Signed prefactor of sin(omega0*t + phi) in the closed form; carries the
// sign of (a_f - a_i).
double envelope_signed(const ControlSpec& spec, const SystemParams& params, double t);

// |envelope_signed|.
double envelope(const ControlSpec& spec, const SystemParams& params, double t);

// Complex RWA envelope EE(t) with E(t) = EE(t)e^{-i omega0 t} + c.c.
complexd rwa_envelope(const ControlSpec& spec, const SystemParams& params, double t);

// Pointwise closed-form sampling on a strictly increasing grid.
Pulse sample_pulse(const ControlSpec& spec, const SystemParams& params,
                   const std::vector<double>& grid);

// State on the prescribed path at t0. Phase convention: phi1 = phi, phi2 = 0,
// i.e. c1 = sqrt(f(t0)) e^{i phi}, c2 = sqrt(1 - f(t0)).
QuantumState initial_state(const ControlSpec& spec, double t0);

}  // namespace qdrive
