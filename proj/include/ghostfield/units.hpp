#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ghostfield {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

enum class CouplingKind { EM, Gravity };

/// Natural units: hbar = c = epsilon0 = G = 1 throughout the numerics.
/// To map a phase back to SI use si_coulomb_phase() below; nothing inside
/// the integrators ever sees a dimensionful constant.
struct UnitSystem {
    static constexpr double hbar = 1.0;
    static constexpr double c = 1.0;
    static constexpr double epsilon0 = 1.0;
    static constexpr double G = 1.0;
};

/// Physical scenario: two charges (or masses), each sharp at one position
/// or superposed across two branch positions, evolving for a fixed time.
struct Configuration {
    CouplingKind coupling_kind = CouplingKind::EM;
    double charge_value = 1.0; // q (EM) or m (gravity), dimensionless
    std::vector<Vec3> positions_a;
    std::vector<Vec3> positions_b;
    double time = 1.0;

    /// Throws std::invalid_argument on coincident positions, empty or
    /// oversized branch lists, negative charge or time.
    void validate() const;
};

/// Effective coupling in the closed-form phase kappa*t/R:
/// q^2/(4 pi epsilon0) for EM, G m^2 for gravity.
double kappa(const Configuration& config);

/// SI value of the accumulated two-charge phase q^2 t / (4 pi eps0 hbar R).
/// This is the only place SI constants appear.
double si_coulomb_phase(double q_coulomb, double t_seconds, double r_meters);

struct ModeAmplitude {
    double k_magnitude = 0.0;
    Complex value{0.0, 0.0};
};

/// omega(k) = c k.
double mode_frequency(double k_magnitude);

/// Per-mode coupling g(k): EM q*sqrt(1/(2 k (2 pi)^3)), gravity
/// m*sqrt(G/(omega(k) (2 pi)^2)), in natural units.
double coupling_g(double k_magnitude, const Configuration& config);

/// Eigenvalue of the charge-density mode operator on a sharp two-position
/// charge configuration: (g/omega)(e^{-i k.r_a} + e^{-i k.r_b}).
ModeAmplitude eta_eigenvalue(const Vec3& k_vec, const Vec3& pos_a,
                             const Vec3& pos_b, const Configuration& config);

/// Single-position term (g/omega) e^{-i k.r}; building block of the above.
Complex eta_single_term(const Vec3& k_vec, const Vec3& pos,
                        const Configuration& config);

} // namespace ghostfield
