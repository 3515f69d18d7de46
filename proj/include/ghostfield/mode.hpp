#pragma once

#include "ghostfield/fock.hpp"

#include <utility>

namespace ghostfield {

/// Scalar-mode Hamiltonian hbar*omega*(-a^T a + a eta^* + eta a^T) on the
/// truncated space. In matrix form -a^T a = +a^dag a, so
/// h = omega*(a^dag a + conj(eta) a - eta a^dag). M-self-adjoint.
struct ModeHamiltonian {
    double k_magnitude = 0.0;
    Complex eta{0.0, 0.0};
    MatrixXc h;
};

/// Sharp two-position charge branch together with the matching M-coherent
/// scalar-field state selected by the supplementary condition.
struct ConstrainedState {
    std::pair<int, int> charge_label{0, 1};
    MState photon_state;
};

ModeHamiltonian build_mode_hamiltonian(double k_magnitude, Complex eta,
                                       const FockSpaceRep& rep);

ConstrainedState make_constrained_state(const ModeHamiltonian& mode,
                                        const FockSpaceRep& rep,
                                        std::pair<int, int> label = {0, 1});

/// Per-mode phase contribution omega(k) |eta|^2 t.
double closed_form_mode_phase(double k_magnitude, Complex eta, double time);

struct ModePhase {
    double phase = 0.0;   // in [0, 2 pi)
    double modulus = 0.0; // evolution-overlap modulus, 1 up to truncation
};

/// Evolves the constrained state with the dense exponential of h and reads
/// the accumulated phase off the M-overlap. Throws TruncationError when the
/// overlap modulus strays from 1 by more than modulus_tol.
ModePhase brute_force_mode_phase(const ModeHamiltonian& mode,
                                 const ConstrainedState& state, double time,
                                 double modulus_tol = 1e-6);

struct EvolvedModeOps {
    MatrixXc a_t; // U^T a U = eta + e^{-i omega t} (a - eta)
    MatrixXc n_t; // U^T a^T a U
};

/// Heisenberg evolution of the mode generators. The evolved a carries the
/// static source term eta; the displaced mode a - eta rotates freely, and
/// that identity is verified on the interior block before returning.
EvolvedModeOps heisenberg_mode_operators(const ModeHamiltonian& mode,
                                         double time);

/// Expectations of the displaced-mode quadrature (a-eta)(t) + adjoint and of
/// the displaced number operator in the given state. Both vanish on states
/// satisfying the supplementary condition.
std::pair<double, double>
ghost_null_expectations(const ModeHamiltonian& mode,
                        const ConstrainedState& state, double time);

} // namespace ghostfield
