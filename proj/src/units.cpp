#include "ghostfield/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ghostfield {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMinSeparation = 1e-9;
} // namespace

void Configuration::validate() const {
    if (charge_value < 0.0)
        throw std::invalid_argument("charge value must be >= 0");
    if (time < 0.0)
        throw std::invalid_argument("evolution time must be >= 0");
    if (positions_a.empty() || positions_a.size() > 2)
        throw std::invalid_argument("particle A needs 1 or 2 branch positions");
    if (positions_b.empty() || positions_b.size() > 2)
        throw std::invalid_argument("particle B needs 1 or 2 branch positions");
    for (const auto& ra : positions_a)
        for (const auto& rb : positions_b)
            if ((ra - rb).norm() < kMinSeparation)
                throw std::invalid_argument(
                    "coincident A/B positions (1/R singular)");
    if (positions_a.size() == 2 &&
        (positions_a[0] - positions_a[1]).norm() < kMinSeparation)
        throw std::invalid_argument("degenerate superposition branches of A");
    if (positions_b.size() == 2 &&
        (positions_b[0] - positions_b[1]).norm() < kMinSeparation)
        throw std::invalid_argument("degenerate superposition branches of B");
}

double kappa(const Configuration& config) {
    const double v = config.charge_value;
    if (config.coupling_kind == CouplingKind::EM)
        return v * v / (4.0 * kPi * UnitSystem::epsilon0);
    return UnitSystem::G * v * v;
}

double si_coulomb_phase(double q_coulomb, double t_seconds, double r_meters) {
    constexpr double eps0 = 8.8541878128e-12; // F/m
    constexpr double hbar = 1.054571817e-34;  // J s
    return q_coulomb * q_coulomb * t_seconds /
           (4.0 * kPi * eps0 * hbar * r_meters);
}

double mode_frequency(double k_magnitude) {
    if (!(k_magnitude > 0.0))
        throw std::domain_error("mode_frequency: k must be > 0");
    return UnitSystem::c * k_magnitude;
}

double coupling_g(double k_magnitude, const Configuration& config) {
    const double omega = mode_frequency(k_magnitude);
    const double two_pi = 2.0 * kPi;
    if (config.coupling_kind == CouplingKind::EM) {
        return config.charge_value * UnitSystem::c *
               std::sqrt(UnitSystem::hbar /
                         (2.0 * UnitSystem::epsilon0 * omega *
                          two_pi * two_pi * two_pi));
    }
    return config.charge_value * UnitSystem::c *
           std::sqrt(UnitSystem::G /
                     (UnitSystem::hbar * omega * two_pi * two_pi));
}

Complex eta_single_term(const Vec3& k_vec, const Vec3& pos,
                        const Configuration& config) {
    const double k = k_vec.norm();
    const double omega = mode_frequency(k);
    const double g = coupling_g(k, config);
    const double phase = -k_vec.dot(pos);
    return (g / (UnitSystem::hbar * omega)) *
           Complex(std::cos(phase), std::sin(phase));
}

ModeAmplitude eta_eigenvalue(const Vec3& k_vec, const Vec3& pos_a,
                             const Vec3& pos_b, const Configuration& config) {
    return {k_vec.norm(), eta_single_term(k_vec, pos_a, config) +
                              eta_single_term(k_vec, pos_b, config)};
}

} // namespace ghostfield
