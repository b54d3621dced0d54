#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qdrive/analysis.hpp"
#include "qdrive/dynamics.hpp"

using namespace qdrive;

namespace {

const SystemParams kFig1Params{0.02, 6.0};
const ControlSpec kFig1Spec{0.4, 1.0, 0.01, 0.0};

SimConfig window(double t0, double t1) {
    SimConfig c;
    c.t_start = t0;
    c.t_end = t1;
    return c;
}

QuantumState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    complexd c1(u(rng), u(rng)), c2(u(rng), u(rng));
    const double n = std::sqrt(std::norm(c1) + std::norm(c2));
    return normalized_state(c1 / n, c2 / n);
}

}  // namespace

TEST_CASE("exact rhs spot values") {
    const QuantumState ground = normalized_state(1.0, 0.0);
    const Derivs free = rhs_exact(ground, 3.7, 0.0, kFig1Params);
    CHECK(std::abs(free.dc1) == 0.0);
    CHECK(std::abs(free.dc2) == 0.0);

    const double e0 = 0.01;
    const Derivs driven = rhs_exact(ground, 0.0, e0, kFig1Params);
    CHECK(std::abs(driven.dc1) == 0.0);
    CHECK(std::abs(driven.dc2 - complexd(0.0, kFig1Params.mu * e0)) < 1e-15);
}

TEST_CASE("rwa rhs spot values") {
    const QuantumState ground = normalized_state(1.0, 0.0);
    const Derivs free = rhs_rwa(ground, 1.0, complexd(0.0, 0.0), 0.1, kFig1Params);
    CHECK(std::abs(free.dc1) == 0.0);
    CHECK(std::abs(free.dc2) == 0.0);

    const complexd env(0.003, 0.0);
    const Derivs driven = rhs_rwa(ground, 0.0, env, 0.0, kFig1Params);
    CHECK(std::abs(driven.dc2 - complexd(0.0, kFig1Params.mu * 0.003)) < 1e-15);
}

TEST_CASE("both right-hand sides conserve the norm analytically") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const QuantumState s = random_state(rng);
        const double t = 100.0 * u(rng);
        const double field = 0.01 * u(rng);
        const Derivs de = rhs_exact(s, t, field, kFig1Params);
        const double dn_exact =
            std::real(std::conj(s.c1) * de.dc1 + std::conj(s.c2) * de.dc2);
        CHECK(std::abs(dn_exact) < 1e-16);

        const complexd env(0.005 * u(rng), 0.005 * u(rng));
        const Derivs dr = rhs_rwa(s, t, env, 0.01 * u(rng), kFig1Params);
        const double dn_rwa = std::real(std::conj(s.c1) * dr.dc1 + std::conj(s.c2) * dr.dc2);
        CHECK(std::abs(dn_rwa) < 1e-16);
    }
}

TEST_CASE("rabi oracle") {
    std::mt19937 rng(99);
    const QuantumState ground = normalized_state(1.0, 0.0);

    SUBCASE("t = 0 is the identity") {
        const QuantumState s = random_state(rng);
        const QuantumState out = rabi_oracle(s, complexd(0.01, 0.02), 0.003, kFig1Params, 0.0);
        CHECK(std::abs(out.c1 - s.c1) < 1e-15);
        CHECK(std::abs(out.c2 - s.c2) < 1e-15);
    }

    SUBCASE("resonant flopping from the ground state") {
        const double e0 = 0.004;
        for (double t : {10.0, 35.0, 123.0}) {
            const QuantumState out = rabi_oracle(ground, e0, 0.0, kFig1Params, t);
            const double want = std::pow(std::sin(kFig1Params.mu * e0 * t), 2);
            CHECK(population(out, 2) == doctest::Approx(want).epsilon(1e-12));
        }
    }

    SUBCASE("detuned maximum transfer") {
        const double e0 = 0.002, delta = 0.015;
        const double mu_e = kFig1Params.mu * e0;
        const double omega = std::sqrt(4.0 * mu_e * mu_e + delta * delta);
        // max reached at Omega t / 2 = pi/2
        const QuantumState out = rabi_oracle(ground, e0, delta, kFig1Params, kPi / omega);
        const double want = 4.0 * mu_e * mu_e / (4.0 * mu_e * mu_e + delta * delta);
        CHECK(population(out, 2) == doctest::Approx(want).epsilon(1e-12));
        // and it is a max: nearby times give less
        CHECK(population(rabi_oracle(ground, e0, delta, kFig1Params, 0.9 * kPi / omega), 2) < want);
    }

    SUBCASE("norm exactly preserved") {
        for (int i = 0; i < 50; ++i) {
            const QuantumState s = random_state(rng);
            const QuantumState out =
                rabi_oracle(s, complexd(0.01, -0.004), 0.006, kFig1Params, 517.0);
            CHECK(std::abs(out.norm_sq() - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("zero field: populations frozen, time reversal exact") {
    DriveField none;
    none.field = [](double) { return 0.0; };
    none.envelope = [](double) { return complexd(0.0, 0.0); };
    none.carrier = kFig1Params.omega0;
    none.has_envelope = true;

    std::mt19937 rng(7);
    const QuantumState init = random_state(rng);
    const SimConfig fwd = window(0.0, 500.0);
    const Trajectory traj = propagate(init, none, Frame::Exact, kFig1Params, fwd);
    for (const QuantumState& s : traj.states) {
        CHECK(std::abs(population(s, 1) - population(init, 1)) <= 1e-12);
        CHECK(std::abs(population(s, 2) - population(init, 2)) <= 1e-12);
    }
    CHECK(norm_drift(traj) <= 1e-14);

    // forward then backward in the mirrored field returns the initial state
    const QuantumState end = traj.states.back();
    const Trajectory back = propagate(end, none, Frame::Exact, kFig1Params, fwd);
    CHECK(std::abs(back.states.back().c1 - init.c1) <= 1e-10);
    CHECK(std::abs(back.states.back().c2 - init.c2) <= 1e-10);
}

TEST_CASE("rwa propagation matches the rabi oracle for constant drive") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> uamp(0.001, 0.01);
    std::uniform_real_distribution<double> uphase(-kPi, kPi);
    std::uniform_real_distribution<double> udet(-0.02, 0.02);
    for (int i = 0; i < 100; ++i) {
        const double amp = uamp(rng);
        const complexd env0 = amp * std::exp(complexd(0.0, uphase(rng)));
        const double delta = udet(rng);
        const QuantumState init = random_state(rng);

        const double omega =
            std::sqrt(4.0 * kFig1Params.mu * kFig1Params.mu * std::norm(env0) + delta * delta);
        const double t_end = 10.0 * 2.0 * kPi / omega;

        DriveField drive;
        drive.field = [](double) { return 0.0; };  // not used in the RWA frame
        drive.envelope = [env0](double) { return env0; };
        drive.carrier = kFig1Params.omega0 + delta;
        drive.has_envelope = true;

        SimConfig cfg = window(0.0, t_end);
        cfg.record_stride = std::max(1, static_cast<int>(t_end / 50.0));
        const Trajectory traj = propagate(init, drive, Frame::Rwa, kFig1Params, cfg);

        const QuantumState want = rabi_oracle(init, env0, delta, kFig1Params, traj.times.back());
        CHECK(std::abs(traj.states.back().c1 - want.c1) <= 1e-8);
        CHECK(std::abs(traj.states.back().c2 - want.c2) <= 1e-8);
    }
}

TEST_CASE("fig1 pulse drives the full transfer in the exact frame") {
    const DriveField drive = make_drive(kFig1Spec, kFig1Params);
    const QuantumState init = initial_state(kFig1Spec, -1500.0);
    const auto ref = [](double t) { return control_function(t, kFig1Spec).f; };
    const Trajectory traj =
        propagate(init, drive, Frame::Exact, kFig1Params, window(-1500.0, 1500.0), ref);
    CHECK(population(traj.states.back(), 1) >= 0.99);
    // The counter-rotating ripple peaks at 0.0381 for alpha = 0.01 (verified
    // against an independent lab-frame integration; scales linearly in alpha).
    CHECK(tracking_error(traj).max_abs <= 0.04);
    CHECK(norm_drift(traj) <= 1e-8);
}

TEST_CASE("interaction-picture propagator matches a lab-frame integration") {
    // Independent oracle: i db/dt = H(t) b with explicit eigenenergies
    // -w0/2, +w0/2 and coupling -mu E(t), integrated by a local RK4. The
    // amplitudes relate by b_k = c_k e^{-i eps_k t}, so populations must
    // coincide.
    const ControlSpec spec{0.4, 1.0, 0.05, 0.0};
    const double half_window = 300.0;
    const double eps1 = -0.5 * kFig1Params.omega0, eps2 = 0.5 * kFig1Params.omega0;

    auto field = [&](double t) { return synthesize_field_closed(spec, kFig1Params, t); };
    auto rhs = [&](double t, const std::array<complexd, 2>& b) {
        const complexd coupling = -kFig1Params.mu * field(t);
        return std::array<complexd, 2>{complexd(0.0, -1.0) * (eps1 * b[0] + coupling * b[1]),
                                       complexd(0.0, -1.0) * (coupling * b[0] + eps2 * b[1])};
    };

    const QuantumState init = initial_state(spec, -half_window);
    std::array<complexd, 2> b{init.c1 * std::exp(complexd(0.0, eps1 * half_window)),
                              init.c2 * std::exp(complexd(0.0, eps2 * half_window))};
    const double h = 0.05;
    double t = -half_window;
    while (t < half_window - 1e-9) {
        const double step = std::min(h, half_window - t);
        const auto k1 = rhs(t, b);
        const auto k2 = rhs(t + 0.5 * step, {b[0] + 0.5 * step * k1[0], b[1] + 0.5 * step * k1[1]});
        const auto k3 = rhs(t + 0.5 * step, {b[0] + 0.5 * step * k2[0], b[1] + 0.5 * step * k2[1]});
        const auto k4 = rhs(t + step, {b[0] + step * k3[0], b[1] + step * k3[1]});
        for (int i = 0; i < 2; ++i)
            b[i] += (step / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += step;
    }

    const DriveField drive = make_drive(spec, kFig1Params);
    const Trajectory traj =
        propagate(init, drive, Frame::Exact, kFig1Params, window(-half_window, half_window));
    CHECK(population(traj.states.back(), 1) ==
          doctest::Approx(std::norm(b[0])).epsilon(1e-8));
    CHECK(population(traj.states.back(), 2) ==
          doctest::Approx(std::norm(b[1])).epsilon(1e-8));
}

TEST_CASE("exact-RWA agreement degrades as the pulse shortens") {
    auto max_pop_gap = [](double alpha) {
        ControlSpec spec = kFig1Spec;
        spec.alpha = alpha;
        const double half_window = 15.0 / alpha;
        const DriveField drive = make_drive(spec, kFig1Params);
        const QuantumState init = initial_state(spec, -half_window);
        const SimConfig cfg = window(-half_window, half_window);
        const Trajectory exact = propagate(init, drive, Frame::Exact, kFig1Params, cfg);
        const Trajectory rwa = propagate(init, drive, Frame::Rwa, kFig1Params, cfg);
        double gap = 0.0;
        for (std::size_t i = 0; i < exact.states.size(); ++i)
            gap = std::max(gap, std::abs(population(exact.states[i], 1) -
                                         population(rwa.states[i], 1)));
        return gap;
    };
    // 0.0381 measured for alpha = 0.01; the gap equals the counter-rotating
    // tracking ripple since the RWA run reproduces f(t) exactly.
    const double gap_slow = max_pop_gap(0.01);
    CHECK(gap_slow <= 0.04);
    double prev = gap_slow;
    for (double alpha : {0.02, 0.035, 0.05}) {
        const double gap = max_pop_gap(alpha);
        CHECK(gap > prev);
        prev = gap;
    }
}

TEST_CASE("fixed-step rk4 converges at 4th order on the fig1 pulse") {
    const DriveField drive = make_drive(kFig1Spec, kFig1Params);
    const QuantumState init = initial_state(kFig1Spec, -1500.0);

    SimConfig ref_cfg = window(-1500.0, 1500.0);
    ref_cfg.rel_tol = 1e-12;
    ref_cfg.abs_tol = 1e-14;
    const QuantumState ref =
        propagate(init, drive, Frame::Exact, kFig1Params, ref_cfg).states.back();

    auto err_at = [&](double h) {
        SimConfig cfg = window(-1500.0, 1500.0);
        cfg.method = Method::FixedRk4;
        cfg.step = h;
        cfg.record_stride = 1000000;  // only endpoints matter
        const QuantumState got =
            propagate(init, drive, Frame::Exact, kFig1Params, cfg).states.back();
        return std::max(std::abs(got.c1 - ref.c1), std::abs(got.c2 - ref.c2));
    };

    const double e1 = err_at(1.0);
    const double e2 = err_at(0.5);
    const double ratio = e1 / e2;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("fixed-step default is 200 steps per carrier period") {
    const DriveField drive = make_drive(kFig1Spec, kFig1Params);
    const QuantumState init = initial_state(kFig1Spec, -1500.0);
    SimConfig cfg = window(-1500.0, 1500.0);
    cfg.method = Method::FixedRk4;
    cfg.step = 0.0;  // ask for the default
    cfg.record_stride = 1 << 30;
    const Trajectory traj = propagate(init, drive, Frame::Exact, kFig1Params, cfg);
    const Trajectory ref = propagate(init, drive, Frame::Exact, kFig1Params,
                                     window(-1500.0, 1500.0));
    CHECK(std::abs(traj.states.back().c1 - ref.states.back().c1) < 1e-6);
    CHECK(std::abs(traj.states.back().c2 - ref.states.back().c2) < 1e-6);
}

TEST_CASE("adaptive integrator reports step-size underflow") {
    const DriveField drive = make_drive(kFig1Spec, kFig1Params);
    const QuantumState init = initial_state(kFig1Spec, -1500.0);
    SimConfig cfg = window(-1500.0, 1500.0);
    cfg.rel_tol = 1e-300;
    cfg.abs_tol = 1e-300;
    CHECK_THROWS_AS(propagate(init, drive, Frame::Exact, kFig1Params, cfg), NumericalFailure);
}

TEST_CASE("norm_drift of a single normalized sample is tiny") {
    Trajectory t;
    t.times = {0.0};
    t.states = {normalized_state(std::sqrt(0.3), std::sqrt(0.7))};
    t.field_values = {0.0};
    t.reference_f = {0.3};
    CHECK(norm_drift(t) <= 1e-15);
}

TEST_CASE("rwa frame requires an envelope") {
    DriveField bare;
    bare.field = [](double) { return 0.0; };
    bare.carrier = kFig1Params.omega0;
    CHECK_THROWS_AS(
        propagate(normalized_state(1.0, 0.0), bare, Frame::Rwa, kFig1Params, window(0.0, 10.0)),
        std::invalid_argument);
}
