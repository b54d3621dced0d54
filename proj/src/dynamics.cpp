#include "qdrive/dynamics.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace qdrive {

namespace {

using State2 = std::array<complexd, 2>;
using Rhs = std::function<State2(double, const State2&)>;

State2 axpy(const State2& y, double h, const State2& k) {
    return {y[0] + h * k[0], y[1] + h * k[1]};
}

// One classical RK4 step.
State2 rk4_step(const Rhs& rhs, double t, const State2& y, double h) {
    const State2 k1 = rhs(t, y);
    const State2 k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State2 k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State2 k4 = rhs(t + h, axpy(y, h, k3));
    State2 out;
    for (int i = 0; i < 2; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Dormand-Prince 5(4) embedded pair. Returns the 5th-order solution and the
// scaled error estimate of the embedded 4th-order one.
struct Dp5Result {
    State2 y;
    double err;  // max_i |y5_i - y4_i| / (abs_tol + rel_tol * |y_i|)
};

Dp5Result dp5_step(const Rhs& rhs, double t, const State2& y, double h, double rel_tol,
                   double abs_tol) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const State2 k1 = rhs(t, y);
    const State2 k2 = rhs(t + c2 * h, {y[0] + h * a21 * k1[0], y[1] + h * a21 * k1[1]});
    const State2 k3 = rhs(t + c3 * h, {y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                                       y[1] + h * (a31 * k1[1] + a32 * k2[1])});
    const State2 k4 = rhs(t + c4 * h, {y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                                       y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])});
    const State2 k5 =
        rhs(t + c5 * h, {y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
                         y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])});
    const State2 k6 = rhs(
        t + h, {y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
                y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1])});

    State2 y5;
    for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const State2 k7 = rhs(t + h, y5);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
        const complexd de =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(de) / sc);
    }
    return {y5, err};
}

}  // namespace

DriveField make_drive(const ControlSpec& spec, const SystemParams& params) {
    spec.validate();
    params.validate();
    DriveField d;
    d.field = [spec, params](double t) { return synthesize_field_closed(spec, params, t); };
    d.envelope = [spec, params](double t) { return rwa_envelope(spec, params, t); };
    d.carrier = params.omega0;
    d.has_envelope = true;
    return d;
}

Derivs rhs_exact(const QuantumState& state, double t, double field, const SystemParams& params) {
    const complexd i_unit(0.0, 1.0);
    const complexd rot = std::exp(complexd(0.0, -params.omega0 * t));
    return {i_unit * state.c2 * params.mu * field * rot,
            i_unit * state.c1 * params.mu * field * std::conj(rot)};
}

Derivs rhs_rwa(const QuantumState& state, double t, complexd env, double delta,
               const SystemParams& params) {
    const complexd i_unit(0.0, 1.0);
    const complexd rot = std::exp(complexd(0.0, delta * t));
    return {i_unit * state.c2 * params.mu * std::conj(env) * rot,
            i_unit * state.c1 * params.mu * env * std::conj(rot)};
}

Trajectory propagate(const QuantumState& initial, const DriveField& drive, Frame frame,
                     const SystemParams& params, const SimConfig& config,
                     const std::function<double(double)>& reference_f) {
    config.validate();
    params.validate();
    if (frame == Frame::Rwa && !drive.has_envelope)
        throw std::invalid_argument("propagate: RWA frame requires an envelope representation");

    const double delta = drive.carrier - params.omega0;
    Rhs rhs;
    if (frame == Frame::Exact) {
        rhs = [&](double t, const State2& y) {
            const Derivs d = rhs_exact({y[0], y[1]}, t, drive.field(t), params);
            return State2{d.dc1, d.dc2};
        };
    } else {
        rhs = [&](double t, const State2& y) {
            const Derivs d = rhs_rwa({y[0], y[1]}, t, drive.envelope(t), delta, params);
            return State2{d.dc1, d.dc2};
        };
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    Trajectory traj;
    auto record = [&](double t, const State2& y) {
        traj.times.push_back(t);
        traj.states.push_back({y[0], y[1]});
        traj.field_values.push_back(drive.field ? drive.field(t) : nan);
        traj.reference_f.push_back(reference_f ? reference_f(t) : nan);
    };

    State2 y{initial.c1, initial.c2};
    double t = config.t_start;
    record(t, y);

    if (config.method == Method::FixedRk4) {
        // 200 steps per carrier period unless the caller picked a step
        const double step =
            config.step > 0.0 ? config.step : (2.0 * kPi / params.omega0) / 200.0;
        const long n_steps =
            static_cast<long>(std::ceil((config.t_end - config.t_start) / step - 1e-12));
        for (long i = 0; i < n_steps; ++i) {
            const double t_next = std::min(config.t_start + (i + 1) * step, config.t_end);
            y = rk4_step(rhs, t, y, t_next - t);
            t = t_next;
            if ((i + 1) % config.record_stride == 0 || i + 1 == n_steps) record(t, y);
        }
        return traj;
    }

    // Adaptive: record on the uniform output grid, stepping exactly onto each
    // grid point.
    const double dt_out = 1.0 * config.record_stride;
    double t_record = config.t_start;
    double h = std::min(dt_out, (config.t_end - config.t_start) * 1e-3);
    while (t < config.t_end) {
        if (t >= t_record - 1e-12) t_record = std::min(t_record + dt_out, config.t_end);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericalFailure("propagate: step size underflow at t = " + std::to_string(t), t);
        const bool clipped = t_record - t < h;
        const double h_try = clipped ? t_record - t : h;
        const Dp5Result r = dp5_step(rhs, t, y, h_try, config.rel_tol, config.abs_tol);
        if (r.err <= 1.0) {
            t += h_try;
            y = r.y;
            if (t >= t_record - 1e-9) {
                t = t_record;
                record(t, y);
            }
            // Grow only from an unclipped step; a grid-shortened one says
            // nothing about the natural step size.
            if (!clipped)
                h = h_try * std::clamp(0.9 * std::pow(std::max(r.err, 1e-16), -0.2), 0.2, 5.0);
        } else {
            h = h_try * std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 1.0);
        }
    }
    return traj;
}

QuantumState rabi_oracle(const QuantumState& initial, complexd env0, double delta,
                         const SystemParams& params, double t) {
    // Rotating-frame substitution b1 = c1 e^{-i delta t / 2}, b2 = c2 e^{i delta t / 2}
    // turns the RWA equations into db/dt = i M b with constant Hermitian
    //   M = [[-delta/2, mu env0*], [mu env0, delta/2]],
    // whose exponential is cos(Omega t/2) I + i sin(Omega t/2) (2M/Omega).
    const double omega = std::sqrt(4.0 * params.mu * params.mu * std::norm(env0) + delta * delta);
    if (omega == 0.0) return initial;

    const double half = 0.5 * omega * t;
    const double c = std::cos(half);
    const double s = std::sin(half);
    const complexd i_unit(0.0, 1.0);
    const complexd coupling = 2.0 * params.mu / omega;

    const complexd b1 = (c - i_unit * (delta / omega) * s) * initial.c1 +
                        i_unit * coupling * std::conj(env0) * s * initial.c2;
    const complexd b2 = i_unit * coupling * env0 * s * initial.c1 +
                        (c + i_unit * (delta / omega) * s) * initial.c2;

    const complexd back = std::exp(complexd(0.0, 0.5 * delta * t));
    return {b1 * back, b2 * std::conj(back)};
}

double norm_drift(const Trajectory& traj) {
    double drift = 0.0;
    for (const QuantumState& s : traj.states)
        drift = std::max(drift, std::abs(s.norm_sq() - 1.0));
    return drift;
}

}  // namespace qdrive
