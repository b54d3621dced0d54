#pragma once

#include "qdrive/domain.hpp"

// Diagnostics: how well a propagated trajectory tracks the prescribed path,
// and pulse-shape metrics for judging RWA validity.

namespace qdrive {

struct TrackingError {
    double max_abs;  // max_t |P1(t) - f(t)|
    double l2;       // sqrt(mean_t (P1(t) - f(t))^2)
};

TrackingError tracking_error(const Trajectory& traj);

// |P1(t_end) - a_f|.
double final_population_error(const Trajectory& traj, double a_f);

struct PhaseConstancy {
    double max_deviation;      // max |wrap(relphase(t) - relphase(t0))| over included samples, rad
    std::size_t n_excluded;    // samples skipped because a population fell below the floor
};

// Relative-phase drift along the trajectory. Samples where either population
// is below 1e-6 are excluded and counted; throws std::domain_error when every
// sample is excluded.
PhaseConstancy phase_constancy(const Trajectory& traj);

struct PulseMetrics {
    double peak_amplitude;  // au
    double fwhm;            // au of time
    double cycles_in_fwhm;  // fwhm * omega0 / (2 pi)
};

// Envelope peak and full width at half maximum, by dense scan plus bisection
// refinement. Throws std::domain_error for a_i == a_f (zero envelope).
PulseMetrics pulse_metrics(const ControlSpec& spec, const SystemParams& params);

// Resonance period 2 pi / omega0 converted to femtoseconds.
double period_crosscheck(const SystemParams& params);

}  // namespace qdrive
