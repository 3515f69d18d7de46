#pragma once

#include "ghostfield/errors.hpp"
#include "ghostfield/units.hpp"

#include <functional>
#include <utility>

namespace ghostfield {

enum class QuadScheme { CompositeGauss, TanhSinh };
enum class TailRule { None, AnalyticSineIntegral };

/// Radial momentum grid for the oscillatory mode integrals. Panels are
/// aligned to half-periods pi/R of the sinc factor; n_nodes is a lower
/// bound on the total node count.
struct QuadratureSpec {
    double k_min = 0.0;
    double k_max = 0.0;
    int n_nodes = 256;
    QuadScheme scheme = QuadScheme::CompositeGauss;
    TailRule tail = TailRule::AnalyticSineIntegral;
    double rel_tol = 1e-6;

    void validate() const;
};

/// k_max = 200/R, 256 nodes, analytic tail.
QuadratureSpec default_spec_for(double R);

struct PhaseResult {
    double phase = 0.0;               // position-dependent part only
    double subtracted_constant = 0.0; // cutoff-dependent self-energy phase
    double est_error = 0.0;
    QuadratureSpec spec_used;
};

/// Solid-angle average of cos(k.dr) over directions of k: sin(kR)/(kR).
double angular_reduce(double R, double k);

/// Si(x), series below x=2 and a complex continued fraction above.
double sine_integral(double x);

/// Analytic remainder of int sin(kR)/k dk beyond the cutoff:
/// pi/2 - Si(k_max R).
double sine_integral_tail(double k_max, double R);

/// Closed-form oracle kappa * t / R.
double analytic_phase(const Configuration& config, double R);

/// Numerical mode integral of the accumulated phase between one charge at
/// pos_a and the other at pos_b, with the position-independent self-energy
/// part subtracted and reported.
PhaseResult coulomb_phase(const Configuration& config, const Vec3& pos_a,
                          const Vec3& pos_b, const QuadratureSpec& spec);

/// Radial position-dependent phase-density prefactor 8 pi k g(k)^2
/// (k-independent; equals 2 kappa / pi in both coupling conventions).
double phase_prefactor(const Configuration& config);

/// Integrates f over [k_min, k_max] on sine-period-aligned composite panels
/// (width pi/align_R) with fixed-order compensated summation. Returns the
/// value and an embedded half-order error estimate.
std::pair<double, double>
radial_integrate(const std::function<double(double)>& f,
                 const QuadratureSpec& spec, double align_R);

} // namespace ghostfield
