#include <doctest.h>

#include "ghostfield/fock.hpp"

#include <cmath>
#include <random>

using namespace ghostfield;

namespace {

MState basis_state(int n, const FockSpaceRep& rep) {
    MState s;
    s.coeffs = VectorXc::Zero(rep.dim());
    s.coeffs[n] = 1.0;
    return s;
}

MatrixXc random_matrix(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXc m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = Complex(u(rng), u(rng));
    return m;
}

} // namespace

TEST_CASE("indefinite metric: number-basis norms alternate") {
    FockSpaceRep rep(6);
    CHECK(m_inner(basis_state(0, rep), basis_state(0, rep)).real() ==
          doctest::Approx(1.0));
    CHECK(m_inner(basis_state(1, rep), basis_state(1, rep)).real() ==
          doctest::Approx(-1.0));
    CHECK(m_inner(basis_state(2, rep), basis_state(2, rep)).real() ==
          doctest::Approx(1.0));
    CHECK(std::abs(m_inner(basis_state(0, rep), basis_state(1, rep))) <
          1e-15);
}

TEST_CASE("metric adjoint of the annihilator is minus the dagger") {
    FockSpaceRep rep(8);
    CHECK((m_adjoint(rep.a()) + rep.a().adjoint()).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((rep.a_t() + rep.a().adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("metric adjoint is an involution and reverses products") {
    FockSpaceRep rep(5);
    const MatrixXc x = random_matrix(rep.dim(), 11);
    const MatrixXc y = random_matrix(rep.dim(), 23);
    CHECK((m_adjoint(m_adjoint(x)) - x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m_adjoint(x * y) - m_adjoint(y) * m_adjoint(x))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    // the metric itself is self-adjoint in its own sense
    CHECK((m_adjoint(rep.m()) - rep.m()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ghost commutation relation holds away from the truncation edge") {
    for (int n_max : {1, 8, 32}) {
        FockSpaceRep rep(n_max);
        // sqrt(n)*sqrt(n) rounding leaves ~1e-14 residue at larger n
        CHECK(commutator_check(rep) < (n_max <= 8 ? 1e-14 : 1e-13));
        // the edge itself carries the full truncation artifact
        const MatrixXc comm = rep.a() * rep.a_t() - rep.a_t() * rep.a();
        const MatrixXc dev =
            comm + MatrixXc::Identity(rep.dim(), rep.dim());
        CHECK(dev.cwiseAbs().maxCoeff() ==
              doctest::Approx(double(n_max + 1)).epsilon(1e-14));
    }
}

TEST_CASE("metric coherent state: vacuum at zero amplitude") {
    FockSpaceRep rep(8);
    const MState psi = m_coherent(Complex(0.0, 0.0), rep);
    CHECK(std::abs(psi.coeffs[0] - 1.0) < 1e-15);
    CHECK(psi.coeffs.tail(rep.dim() - 1).norm() < 1e-15);
}

TEST_CASE("metric coherent state: unit metric norm, exponential plain norm") {
    FockSpaceRep rep(32);
    const Complex lam(0.5, 0.0);
    const MState psi = m_coherent(lam, rep, 1e-10);
    CHECK(std::abs(m_inner(psi, psi) - Complex(1.0, 0.0)) < 1e-10);
    // frozen reference: the plain norm is e^{|lambda|^2} = e^{0.25}
    CHECK(std::abs(psi.coeffs.norm() - 1.2840254166877414841) < 1e-8);
    const double residual =
        (rep.a() * psi.coeffs - lam * psi.coeffs).norm() / psi.coeffs.norm();
    CHECK(residual < 1e-10);
}

TEST_CASE("metric coherent state: residual shrinks with truncation level") {
    const Complex lam(1.2, 0.0);
    double prev = 1.0;
    for (int n_max : {16, 24, 32, 48}) {
        FockSpaceRep rep(n_max);
        const MState psi = m_coherent(lam, rep, 1.0);
        const double residual =
            (rep.a() * psi.coeffs - lam * psi.coeffs).norm() /
            psi.coeffs.norm();
        CHECK(residual < prev);
        prev = residual;
    }
    CHECK(prev < 1e-12);
}

TEST_CASE("metric coherent state: truncation guard") {
    FockSpaceRep rep(4);
    CHECK_THROWS_AS(m_coherent(Complex(2.0, 0.0), rep), TruncationError);
}

TEST_CASE("displacement: identity at zero, metric-unitary otherwise") {
    FockSpaceRep rep(32);
    CHECK((displacement(Complex(0, 0), rep) -
           MatrixXc::Identity(rep.dim(), rep.dim()))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    const MatrixXc d = displacement(Complex(0.6, -0.3), rep);
    const MatrixXc should_be_id =
        m_adjoint(d) * d - MatrixXc::Identity(rep.dim(), rep.dim());
    CHECK(interior_block(should_be_id).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("displacement: the three adjoint-conjugation identities") {
    // The dedicated checker uses exact normal-ordered matrix elements in a
    // guarded space with quadruple precision: the metric sandwich cancels
    // terms ~1e9 at |eta| = 1, far beyond what double precision can resolve.
    for (Complex eta : {Complex(0.4, 0.0), Complex(-0.3, 0.7),
                        Complex(0.0, 1.0)}) {
        const DisplacementIdentityCheck chk =
            displacement_identity_check(eta, 32);
        CHECK(chk.conjugate_a < 1e-9);
        CHECK(chk.conjugate_a_t < 1e-9);
        CHECK(chk.conjugate_number < 1e-9);
        CHECK(chk.m_unitarity < 1e-9);
    }
    CHECK(displacement_identity_check(Complex(0, 0), 16).max() < 1e-15);
    CHECK_THROWS_AS(displacement_identity_check(Complex(1, 0), 0),
                    std::invalid_argument);

    // Double-precision sanity check on the public displacement() matrix at
    // small |eta|, where the conditioning stays manageable: interior of a
    // 32-level block cut from a guarded 96-level computation.
    FockSpaceRep rep(32);
    FockSpaceRep big(96);
    const int keep = rep.dim() - 4;
    const MatrixXc small_id = MatrixXc::Identity(rep.dim(), rep.dim());
    const Complex eta(0.25, -0.1);
    const MatrixXc d = displacement(eta, big);
    const MatrixXc dt = m_adjoint(d);
    auto block = [&](const MatrixXc& m) { return m.topLeftCorner(keep, keep); };
    const MatrixXc lhs1 =
        block(dt * big.a() * d) - block(rep.a() + eta * small_id);
    CHECK(lhs1.cwiseAbs().maxCoeff() < 1e-9);
    const MatrixXc lhs2 = block(dt * big.a_t() * d) -
                          block(rep.a_t() + std::conj(eta) * small_id);
    CHECK(lhs2.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("displacement generates the metric coherent state from vacuum") {
    FockSpaceRep rep(32);
    const Complex eta(0.5, -0.2);
    const MatrixXc d = displacement(eta, rep);
    const MState coh = m_coherent(eta, rep);
    VectorXc from_vacuum = d.col(0);
    CHECK((from_vacuum.head(rep.dim() - 4) - coh.coeffs.head(rep.dim() - 4))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
}

TEST_CASE("displacement composition law up to a phase") {
    FockSpaceRep rep(96);
    const Complex e1(0.3, 0.1), e2(-0.2, 0.4);
    const MatrixXc lhs = displacement(e1, rep) * displacement(e2, rep);
    const MatrixXc rhs = displacement(e1 + e2, rep);
    // expected phase: exp(i Im(conj(e1) e2))  [from the BCH product]
    const Complex phase =
        std::exp(Complex(0.0, std::imag(std::conj(e1) * e2)));
    const int keep = 33; // edge artifacts spread well past a thin margin
    CHECK((lhs.topLeftCorner(keep, keep) -
           phase * rhs.topLeftCorner(keep, keep))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
}

TEST_CASE("matrix exponential: diagonal and inverse-product oracles") {
    MatrixXc d = MatrixXc::Zero(3, 3);
    d(0, 0) = Complex(0.0, 1.0);
    d(1, 1) = Complex(-0.5, 0.0);
    d(2, 2) = Complex(0.2, -0.3);
    const MatrixXc e = matrix_exp(d);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-14);

    const MatrixXc x = random_matrix(6, 7);
    const MatrixXc p = matrix_exp(x, Complex(0.3, 0.2)) *
                       matrix_exp(x, Complex(-0.3, -0.2));
    CHECK((p - MatrixXc::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(matrix_exp(MatrixXc::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("representation bounds") {
    CHECK_THROWS_AS(FockSpaceRep(0), std::invalid_argument);
    CHECK_THROWS_AS(FockSpaceRep(129), std::invalid_argument);
    CHECK_THROWS_AS(m_inner(basis_state(0, FockSpaceRep(2)),
                            basis_state(0, FockSpaceRep(3))),
                    std::invalid_argument);
}
