#include "qdrive/synthesis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdrive {

double sigmoid(double t, double alpha) {
    const double x = alpha * t;
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double u = std::exp(x);
    return u / (1.0 + u);
}

ControlValue control_function(double t, const ControlSpec& spec) {
    const double g = sigmoid(t, spec.alpha);
    const double gdot = spec.alpha * g * (1.0 - g);
    return {spec.a_i * (1.0 - g) + spec.a_f * g, (spec.a_f - spec.a_i) * gdot};
}

void ControlEvaluator::validate(double t_lo, double t_hi) const {
    constexpr int kProbes = 10000;
    const double dt = (t_hi - t_lo) / (kProbes - 1);
    const double h = dt * 1e-3;  // central-difference step

    double fdot_max = 0.0;
    for (int i = 0; i < kProbes; ++i) {
        const double t = t_lo + i * dt;
        const double fi = f(t);
        if (!(fi >= 0.0 && fi <= 1.0))
            throw std::domain_error("ControlEvaluator: f(t) outside [0,1] at t = " + std::to_string(t));
        fdot_max = std::max(fdot_max, std::abs(fdot(t)));
    }
    // The absolute term floors the comparison where fdot is orders below its
    // grid maximum and the central difference is pure ulp noise.
    for (int i = 0; i < kProbes; ++i) {
        const double t = t_lo + i * dt;
        const double fd = fdot(t);
        const double fd_num = (f(t + h) - f(t - h)) / (2.0 * h);
        const double tol = 1e-6 * std::max(std::abs(fd), std::abs(fd_num)) + 1e-9 * fdot_max;
        if (std::abs(fd - fd_num) > tol)
            throw std::domain_error("ControlEvaluator: fdot inconsistent with f at t = " + std::to_string(t));
    }
}

ControlEvaluator sigmoid_evaluator(const ControlSpec& spec) {
    spec.validate();
    ControlEvaluator ev;
    ev.f = [spec](double t) { return control_function(t, spec).f; };
    ev.fdot = [spec](double t) { return control_function(t, spec).fdot; };
    ev.f_minus_inf = spec.a_i;
    ev.f_plus_inf = spec.a_f;
    ev.prefactor_limit = 0.0;  // fdot decays faster than sqrt(f(1-f)) at both ends
    return ev;
}

double synthesize_field_generic(const ControlEvaluator& eval, const SystemParams& params,
                                double phi, double t) {
    const double f = eval.f(t);
    const double fd = eval.fdot(t);
    const double p = f * (1.0 - f);
    double prefactor;
    if (p < 1e-30) {
        if (!eval.prefactor_limit)
            throw std::domain_error(
                "synthesize_field_generic: path touches a pure state at t = " + std::to_string(t) +
                " with no declared limit; Eq. requires infinite field there");
        prefactor = *eval.prefactor_limit;
    } else {
        prefactor = fd / std::sqrt(p);
    }
    return prefactor / params.mu * std::sin(params.omega0 * t + phi);
}

double envelope_signed(const ControlSpec& spec, const SystemParams& params, double t) {
    const double d = spec.a_f - spec.a_i;
    if (d == 0.0) return 0.0;
    const double x = spec.alpha * t;
    // Both branches exponentiate only non-positive arguments.
    if (x <= 0.0) {
        const double u = std::exp(x);
        if (u == 0.0) return 0.0;
        const double s = std::sqrt((1.0 - spec.a_i + (1.0 - spec.a_f) * u) * (spec.a_i + spec.a_f * u));
        if (s == 0.0) return 0.0;  // a_i in {0,1} and u underflowed the product
        return spec.alpha * d * u / ((1.0 + u) * s * params.mu);
    }
    const double v = std::exp(-x);
    if (v == 0.0) return 0.0;
    const double s = std::sqrt(((1.0 - spec.a_i) * v + (1.0 - spec.a_f)) * (spec.a_i * v + spec.a_f));
    if (s == 0.0) return 0.0;
    return spec.alpha * d * v / ((1.0 + v) * s * params.mu);
}

double envelope(const ControlSpec& spec, const SystemParams& params, double t) {
    return std::abs(envelope_signed(spec, params, t));
}

double synthesize_field_closed(const ControlSpec& spec, const SystemParams& params, double t) {
    return envelope_signed(spec, params, t) * std::sin(params.omega0 * t + spec.phi);
}

complexd rwa_envelope(const ControlSpec& spec, const SystemParams& params, double t) {
    // A(t) sin(w0 t + phi) = EE e^{-i w0 t} + c.c. with EE = (i A / 2) e^{-i phi}
    const double a = envelope_signed(spec, params, t);
    return complexd(0.0, 0.5 * a) * std::exp(complexd(0.0, -spec.phi));
}

Pulse sample_pulse(const ControlSpec& spec, const SystemParams& params,
                   const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sample_pulse: grid must be strictly increasing");
    Pulse p;
    p.spec = spec;
    p.params = params;
    p.carrier = params.omega0;
    p.times = grid;
    p.field.reserve(grid.size());
    for (double t : grid) p.field.push_back(synthesize_field_closed(spec, params, t));
    return p;
}

QuantumState initial_state(const ControlSpec& spec, double t0) {
    spec.validate();
    const double f0 = control_function(t0, spec).f;
    const complexd c1 = std::sqrt(f0) * std::exp(complexd(0.0, spec.phi));
    const complexd c2 = std::sqrt(1.0 - f0);
    return normalized_state(c1, c2);
}

}  // namespace qdrive
