#include "ghostfield/mode.hpp"

#include "ghostfield/units.hpp"

#include <cmath>
#include <numbers>

namespace ghostfield {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

ModeHamiltonian build_mode_hamiltonian(double k_magnitude, Complex eta,
                                       const FockSpaceRep& rep) {
    const double omega = mode_frequency(k_magnitude);
    if (std::norm(eta) > rep.n_max() / 4.0)
        throw TruncationError("build_mode_hamiltonian: |eta|^2 > n_max/4",
                              std::norm(eta));
    const MatrixXc adag = rep.a().adjoint();
    ModeHamiltonian mode;
    mode.k_magnitude = k_magnitude;
    mode.eta = eta;
    // hbar omega (-a^T a + a eta^* + eta a^T), with a^T = -a^dag
    mode.h = omega * (adag * rep.a() + std::conj(eta) * rep.a() - eta * adag);
    return mode;
}

ConstrainedState make_constrained_state(const ModeHamiltonian& mode,
                                        const FockSpaceRep& rep,
                                        std::pair<int, int> label) {
    return {label, m_coherent(mode.eta, rep)};
}

double closed_form_mode_phase(double k_magnitude, Complex eta, double time) {
    return mode_frequency(k_magnitude) * std::norm(eta) * time /
           UnitSystem::hbar;
}

ModePhase brute_force_mode_phase(const ModeHamiltonian& mode,
                                 const ConstrainedState& state, double time,
                                 double modulus_tol) {
    const MatrixXc u = matrix_exp(mode.h, Complex(0.0, -time));
    MState evolved{u * state.photon_state.coeffs};
    const Complex overlap = m_inner(state.photon_state, evolved);
    ModePhase out;
    out.modulus = std::abs(overlap);
    if (std::abs(out.modulus - 1.0) > modulus_tol)
        throw TruncationError(
            "brute_force_mode_phase: evolution-overlap modulus off unity",
            std::abs(out.modulus - 1.0));
    out.phase = std::fmod(-std::arg(overlap), kTwoPi);
    if (out.phase < 0.0)
        out.phase += kTwoPi;
    return out;
}

EvolvedModeOps heisenberg_mode_operators(const ModeHamiltonian& mode,
                                         double time) {
    const int dim = static_cast<int>(mode.h.rows());
    // Operator sandwiches amplify the truncation-edge commutator defect far
    // into the bulk (the displacement is unbounded in the plain norm), so the
    // requested block is cut out of a computation in an enlarged space.
    const int n_guard = std::min(128, 4 * (dim - 1));
    FockSpaceRep guard(n_guard);
    const ModeHamiltonian big =
        build_mode_hamiltonian(mode.k_magnitude, mode.eta, guard);
    const MatrixXc u = matrix_exp(big.h, Complex(0.0, -time));
    const MatrixXc ut = m_adjoint(u);
    const MatrixXc a_big = ut * guard.a() * u;
    const MatrixXc n_big = ut * guard.number_t() * u;
    EvolvedModeOps out;
    out.a_t = a_big.topLeftCorner(dim, dim);
    out.n_t = n_big.topLeftCorner(dim, dim);

    // displaced mode rotates freely: U^T (a - eta) U = e^{-i omega t}(a - eta)
    const double omega = mode_frequency(mode.k_magnitude);
    FockSpaceRep rep(dim - 1);
    const MatrixXc id = MatrixXc::Identity(dim, dim);
    const Complex rot = std::exp(Complex(0.0, -omega * time));
    const MatrixXc closed = rot * (rep.a() - mode.eta * id) + mode.eta * id;
    const double dev = interior_block(out.a_t - closed).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-8))
        throw TruncationError(
            "heisenberg_mode_operators: closed-form deviation on interior",
            dev);
    return out;
}

std::pair<double, double>
ghost_null_expectations(const ModeHamiltonian& mode,
                        const ConstrainedState& state, double time) {
    const int dim = static_cast<int>(mode.h.rows());
    FockSpaceRep rep(dim - 1);
    const MatrixXc id = MatrixXc::Identity(dim, dim);
    const MatrixXc u = matrix_exp(mode.h, Complex(0.0, -time));
    // <<psi| U^T X U |psi>> = <<U psi| X |U psi>>: evolving the state keeps
    // everything inside the low-occupation sector where truncation is benign.
    const MState phi{u * state.photon_state.coeffs};
    const MatrixXc displaced = rep.a() - mode.eta * id;
    const MatrixXc quad = displaced + m_adjoint(displaced);
    const MatrixXc num = m_adjoint(displaced) * displaced;
    const double q = std::abs(m_inner(phi, MState{quad * phi.coeffs}));
    const double n = std::abs(m_inner(phi, MState{num * phi.coeffs}));
    return {q, n};
}

} // namespace ghostfield
