#include "qdrive/domain.hpp"

#include <cmath>

namespace qdrive {

double population(const QuantumState& state, int which) {
    if (which == 1) return std::norm(state.c1);
    if (which == 2) return std::norm(state.c2);
    throw std::invalid_argument("population: state index must be 1 or 2");
}

double wrap_angle(double angle) {
    double w = std::remainder(angle, 2.0 * kPi);  // lands in [-pi, pi]
    if (w <= -kPi) w = kPi;
    return w;
}

double relative_phase(const QuantumState& state) {
    if (std::abs(state.c1) < 1e-12 || std::abs(state.c2) < 1e-12)
        throw std::domain_error("relative_phase: amplitude modulus below 1e-12, phase undefined");
    return wrap_angle(std::arg(state.c1) - std::arg(state.c2));
}

}  // namespace qdrive
