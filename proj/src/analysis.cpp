#include "qdrive/analysis.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "qdrive/synthesis.hpp"

namespace qdrive {

TrackingError tracking_error(const Trajectory& traj) {
    traj.validate();
    double max_abs = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double ref = traj.reference_f[i];
        if (std::isnan(ref))
            throw std::invalid_argument("tracking_error: trajectory carries no reference f(t)");
        const double d = population(traj.states[i], 1) - ref;
        max_abs = std::max(max_abs, std::abs(d));
        sum_sq += d * d;
    }
    return {max_abs, std::sqrt(sum_sq / static_cast<double>(traj.times.size()))};
}

double final_population_error(const Trajectory& traj, double a_f) {
    if (traj.states.empty()) throw std::invalid_argument("final_population_error: empty trajectory");
    return std::abs(population(traj.states.back(), 1) - a_f);
}

PhaseConstancy phase_constancy(const Trajectory& traj) {
    constexpr double kFloor = 1e-6;
    bool have_ref = false;
    double phase0 = 0.0;
    double max_dev = 0.0;
    std::size_t excluded = 0;
    for (const QuantumState& s : traj.states) {
        if (population(s, 1) < kFloor || population(s, 2) < kFloor) {
            ++excluded;
            continue;
        }
        const double ph = relative_phase(s);
        if (!have_ref) {
            phase0 = ph;
            have_ref = true;
            continue;
        }
        max_dev = std::max(max_dev, std::abs(wrap_angle(ph - phase0)));
    }
    if (!have_ref)
        throw std::domain_error("phase_constancy: every sample has a population below the floor");
    return {max_dev, excluded};
}

namespace {

// Golden-section search for the maximum of fn on [lo, hi], unimodal assumed.
double refine_peak(const std::function<double(double)>& fn, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = fn(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = fn(x1);
        }
    }
    return 0.5 * (a + b);
}

// Bisection on fn(t) - level with a sign change across [lo, hi].
double bisect_crossing(const std::function<double(double)>& fn, double level, double lo, double hi,
                       double tol) {
    double flo = fn(lo) - level;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = fn(mid) - level;
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PulseMetrics pulse_metrics(const ControlSpec& spec, const SystemParams& params) {
    spec.validate();
    params.validate();
    if (spec.a_i == spec.a_f)
        throw std::domain_error("pulse_metrics: a_i == a_f gives a zero envelope, no FWHM");

    auto env = [&](double t) { return envelope(spec, params, t); };

    // The envelope decays at least as e^{-alpha |t| / 2}; +/-50/alpha is far
    // into the tails.
    const double half_window = 50.0 / spec.alpha;
    constexpr int kScan = 10000;
    const double dt = 2.0 * half_window / (kScan - 1);
    int i_max = 0;
    double best = -1.0;
    for (int i = 0; i < kScan; ++i) {
        const double v = env(-half_window + i * dt);
        if (v > best) {
            best = v;
            i_max = i;
        }
    }
    const double t_lo = -half_window + std::max(i_max - 1, 0) * dt;
    const double t_hi = -half_window + std::min(i_max + 1, kScan - 1) * dt;
    const double t_peak = refine_peak(env, t_lo, t_hi, 1e-10);
    const double peak = env(t_peak);

    const double half = 0.5 * peak;
    // Walk outward from the peak until the envelope drops below half-max,
    // then bisect each crossing.
    double left = t_peak;
    while (env(left) >= half) left -= dt;
    double right = t_peak;
    while (env(right) >= half) right += dt;
    const double t_left = bisect_crossing(env, half, left, t_peak, 1e-10);
    const double t_right = bisect_crossing(env, half, t_peak, right, 1e-10);

    const double fwhm = t_right - t_left;
    return {peak, fwhm, fwhm * params.omega0 / (2.0 * kPi)};
}

double period_crosscheck(const SystemParams& params) {
    params.validate();
    return 2.0 * kPi / params.omega0 * kAuTimeFs;
}

}  // namespace qdrive
