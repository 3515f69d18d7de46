#pragma once

#include "ghostfield/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <complex>

namespace ghostfield {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Sign conventions, fixed once and verified by the test suite:
//   coherent eigenvalue:   a |lambda> = +lambda |lambda>
//   displacement:          D(eta) = exp(eta a^dag + conj(eta) a)
//                                 = exp(a eta^dag - eta a^T)   (a^T = -a^dag)
// With these choices the three adjoint-action identities read
//   D^T a D     = a + eta
//   D^T a^T D   = a^T + conj(eta)
//   D^T a^T a D = a^T a + conj(eta) a + eta a^T + |eta|^2.
inline constexpr int kCoherentEigenvalueSign = +1;
inline constexpr int kDisplacementExponentSign = +1;

/// Single scalar mode truncated to |0> .. |n_max>, with the parity metric
/// M = diag((-1)^n). The M-adjoint of the annihilation operator is -a^dag,
/// which realizes the commutator [a, a^T] = -1 away from the truncation edge.
class FockSpaceRep {
  public:
    explicit FockSpaceRep(int n_max);

    int n_max() const { return n_max_; }
    int dim() const { return n_max_ + 1; }
    const MatrixXc& a() const { return a_; }
    const MatrixXc& m() const { return m_; }
    MatrixXc a_t() const { return -a_.adjoint(); } // M a^dag M
    MatrixXc number_t() const { return a_t() * a_; } // a^T a = -a^dag a

  private:
    int n_max_;
    MatrixXc a_;
    MatrixXc m_;
};

/// State in the truncated Fock basis.
struct MState {
    VectorXc coeffs;
    int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// <<lhs|rhs>> = <lhs| M |rhs>.
Complex m_inner(const MState& lhs, const MState& rhs);

/// M op^dag M, with M inferred from the matrix dimension.
MatrixXc m_adjoint(const MatrixXc& op);

/// Max entrywise deviation of [a, a^T] + 1 on the interior block n < n_max.
double commutator_check(const FockSpaceRep& rep);

/// M-normalized eigenstate of a with eigenvalue lambda. Throws
/// TruncationError when |lambda|^2 > n_max/4 or the eigen-residual
/// ||(a - lambda) psi|| / ||psi|| exceeds tol.
MState m_coherent(Complex lambda, const FockSpaceRep& rep, double tol = 1e-8);

/// Displacement operator D(eta); M-unitary, maps vacuum to m_coherent(eta).
MatrixXc displacement(Complex eta, const FockSpaceRep& rep);

/// Max entrywise deviations of the three adjoint-action identities and of
/// M-unitarity D^T D = 1, evaluated on the block n <= n_max - margin.
/// The displacement is unbounded in the plain norm: its metric sandwiches
/// cancel terms ~1e9 at |eta| = 1 and the truncation-edge defect spreads far
/// into the bulk. The check therefore uses exact normal-ordered matrix
/// elements in an enlarged guard space with quadruple-precision arithmetic,
/// which resolves the identities to ~1e-25 for |eta| <= 1.
struct DisplacementIdentityCheck {
    double conjugate_a = 0.0;      // D^T a D     - (a + eta)
    double conjugate_a_t = 0.0;    // D^T a^T D   - (a^T + conj(eta))
    double conjugate_number = 0.0; // D^T a^T a D - dressed number operator
    double m_unitarity = 0.0;      // D^T D - 1
    double max() const {
        return std::max(std::max(conjugate_a, conjugate_a_t),
                        std::max(conjugate_number, m_unitarity));
    }
};
DisplacementIdentityCheck displacement_identity_check(Complex eta, int n_max,
                                                      int margin = 4);

/// exp(scale * op) by scaling-and-squaring. Throws std::overflow_error when
/// the result is not finite.
MatrixXc matrix_exp(const MatrixXc& op, Complex scale = Complex(1.0, 0.0));

/// View of the interior block with `margin` rows/columns dropped at the
/// truncation edge (operator identities necessarily fail there).
inline Eigen::Block<const MatrixXc> interior_block(const MatrixXc& op,
                                                   int margin = 4) {
    const int n = static_cast<int>(op.rows()) - margin;
    return op.topLeftCorner(n > 1 ? n : 1, n > 1 ? n : 1);
}

} // namespace ghostfield
