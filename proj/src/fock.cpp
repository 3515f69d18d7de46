#include "ghostfield/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ghostfield {

FockSpaceRep::FockSpaceRep(int n_max) : n_max_(n_max) {
    if (n_max < 1 || n_max > 128)
        throw std::invalid_argument("FockSpaceRep: n_max must be in [1,128]");
    const int d = n_max + 1;
    a_ = MatrixXc::Zero(d, d);
    m_ = MatrixXc::Zero(d, d);
    for (int n = 1; n <= n_max; ++n)
        a_(n - 1, n) = std::sqrt(static_cast<double>(n));
    for (int n = 0; n <= n_max; ++n)
        m_(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
}

Complex m_inner(const MState& lhs, const MState& rhs) {
    if (lhs.coeffs.size() != rhs.coeffs.size())
        throw std::invalid_argument("m_inner: dimension mismatch");
    Complex acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < lhs.coeffs.size(); ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        acc += std::conj(lhs.coeffs[n]) * sign * rhs.coeffs[n];
    }
    return acc;
}

MatrixXc m_adjoint(const MatrixXc& op) {
    if (op.rows() != op.cols())
        throw std::invalid_argument("m_adjoint: matrix must be square");
    MatrixXc out = op.adjoint();
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            if ((i + j) % 2 == 1)
                out(i, j) = -out(i, j);
    return out;
}

double commutator_check(const FockSpaceRep& rep) {
    const MatrixXc at = rep.a_t();
    const MatrixXc comm = rep.a() * at - at * rep.a();
    const MatrixXc dev =
        comm + MatrixXc::Identity(rep.dim(), rep.dim());
    const int n = rep.n_max(); // exclude the truncation edge row/column
    return dev.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

MState m_coherent(Complex lambda, const FockSpaceRep& rep, double tol) {
    const double abs2 = std::norm(lambda);
    if (abs2 > rep.n_max() / 4.0)
        throw TruncationError("m_coherent: |lambda|^2 exceeds n_max/4", abs2);
    MState psi;
    psi.coeffs = VectorXc::Zero(rep.dim());
    // M-normalization: <<psi|psi>> = e^{|l|^2} e^{-|l|^2} = 1
    psi.coeffs[0] = std::exp(abs2 / 2.0);
    for (int n = 1; n <= rep.n_max(); ++n)
        psi.coeffs[n] =
            psi.coeffs[n - 1] * lambda / std::sqrt(static_cast<double>(n));
    const double norm = psi.coeffs.norm();
    const double residual =
        (rep.a() * psi.coeffs - lambda * psi.coeffs).norm() / norm;
    if (!(residual <= tol))
        throw TruncationError("m_coherent: eigen-residual above tolerance",
                              residual);
    return psi;
}

MatrixXc displacement(Complex eta, const FockSpaceRep& rep) {
    const double abs2 = std::norm(eta);
    if (abs2 > rep.n_max() / 4.0)
        throw TruncationError("displacement: |eta|^2 exceeds n_max/4", abs2);
    const MatrixXc gen =
        eta * rep.a().adjoint().eval() + std::conj(eta) * rep.a();
    return matrix_exp(gen);
}

namespace {

// Minimal complex quadruple-precision arithmetic. The M-metric sandwich
// m_adjoint(D) * op * D sums terms that reach ~1e9 before cancelling to O(1)
// at |eta| = 1, so double precision bottoms out near 1e-7; verifying the
// conjugation identities at 1e-9 needs the extra mantissa bits.
struct QComplex {
    __float128 re = 0, im = 0;
};

QComplex qc_add(QComplex a, QComplex b) { return {a.re + b.re, a.im + b.im}; }

QComplex qc_mul(QComplex a, QComplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

QComplex qc_conj(QComplex a) { return {a.re, -a.im}; }

// one Newton step on the double-precision square root gives full quad accuracy
__float128 q_sqrt(int n) {
    const __float128 x = n;
    const __float128 s0 = std::sqrt(static_cast<double>(n));
    return n == 0 ? 0 : (s0 + x / s0) / 2;
}

double q_abs(QComplex a) {
    return std::sqrt(static_cast<double>(a.re * a.re + a.im * a.im));
}

using QMatrix = std::vector<std::vector<QComplex>>;

QMatrix q_zero(int d) { return QMatrix(d, std::vector<QComplex>(d)); }

QMatrix q_mul(const QMatrix& a, const QMatrix& b) {
    const int d = static_cast<int>(a.size());
    QMatrix out = q_zero(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            if (a[i][k].re == 0 && a[i][k].im == 0)
                continue;
            for (int j = 0; j < d; ++j)
                out[i][j] = qc_add(out[i][j], qc_mul(a[i][k], b[k][j]));
        }
    return out;
}

QMatrix q_m_adjoint(const QMatrix& a) {
    const int d = static_cast<int>(a.size());
    QMatrix out = q_zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            QComplex v = qc_conj(a[j][i]);
            if ((i + j) % 2 == 1) {
                v.re = -v.re;
                v.im = -v.im;
            }
            out[i][j] = v;
        }
    return out;
}

// exp(eta a^dag): entries eta^{k-n} sqrt(k!/n!)/(k-n)!, exact projection of
// the infinite-dimensional operator (intermediate occupations never exceed k)
QMatrix q_exp_raising(QComplex eta, int d) {
    QMatrix out = q_zero(d);
    for (int n = 0; n < d; ++n) {
        out[n][n] = {1, 0};
        for (int k = n + 1; k < d; ++k) {
            QComplex v = qc_mul(out[k - 1][n], eta);
            const __float128 f = q_sqrt(k) / (k - n);
            out[k][n] = {v.re * f, v.im * f};
        }
    }
    return out;
}

double q_block_dev(const QMatrix& lhs, const QMatrix& rhs, int block) {
    double worst = 0.0;
    for (int i = 0; i < block; ++i)
        for (int j = 0; j < block; ++j)
            worst = std::max(
                worst, q_abs({lhs[i][j].re - rhs[i][j].re,
                              lhs[i][j].im - rhs[i][j].im}));
    return worst;
}

} // namespace

DisplacementIdentityCheck displacement_identity_check(Complex eta, int n_max,
                                                      int margin) {
    if (n_max < 1 || n_max > 128)
        throw std::invalid_argument(
            "displacement_identity_check: n_max must be in [1,128]");
    if (margin < 0 || margin > n_max)
        throw std::invalid_argument(
            "displacement_identity_check: bad margin");
    // guard levels keep truncation-edge artifacts away from the tested block
    const int d = std::min(160, n_max + 64) + 1;
    const int block = n_max - margin + 1;

    const QComplex qeta{static_cast<__float128>(eta.real()),
                        static_cast<__float128>(eta.imag())};
    // ladder matrices and identity targets
    QMatrix a = q_zero(d), a_t = q_zero(d), num_t = q_zero(d);
    for (int n = 1; n < d; ++n) {
        a[n - 1][n] = {q_sqrt(n), 0};
        a_t[n][n - 1] = {-q_sqrt(n), 0};
        num_t[n][n] = {static_cast<__float128>(-n), 0};
    }

    // D = e^{|eta|^2/2} exp(eta a^dag) exp(eta^* a); the scalar prefactor is
    // uniform across entries, so double accuracy suffices for it
    const double prefactor = std::exp(std::norm(eta) / 2.0);
    // exp(eta^* a) = m_adjoint(exp(-eta a^dag)) exactly, also in truncation
    QMatrix d_op = q_mul(q_exp_raising(qeta, d),
                         q_m_adjoint(q_exp_raising({-qeta.re, -qeta.im}, d)));
    for (auto& row : d_op)
        for (auto& v : row) {
            v.re *= prefactor;
            v.im *= prefactor;
        }
    const QMatrix d_adj = q_m_adjoint(d_op);

    auto sandwich = [&](const QMatrix& op) {
        return q_mul(d_adj, q_mul(op, d_op));
    };

    QMatrix t1 = a, t2 = a_t, t3 = num_t, t4 = q_zero(d);
    const QComplex ceta = qc_conj(qeta);
    const __float128 abs2 = qeta.re * qeta.re + qeta.im * qeta.im;
    for (int i = 0; i < d; ++i) {
        t1[i][i] = qc_add(t1[i][i], qeta);
        t2[i][i] = qc_add(t2[i][i], ceta);
        t3[i][i] = qc_add(t3[i][i], {abs2, 0});
        t4[i][i] = {1, 0};
        for (int j = 0; j < d; ++j) {
            t3[i][j] = qc_add(t3[i][j], qc_mul(ceta, a[i][j]));
            t3[i][j] = qc_add(t3[i][j], qc_mul(qeta, a_t[i][j]));
        }
    }

    DisplacementIdentityCheck out;
    out.conjugate_a = q_block_dev(sandwich(a), t1, block);
    out.conjugate_a_t = q_block_dev(sandwich(a_t), t2, block);
    out.conjugate_number = q_block_dev(sandwich(num_t), t3, block);
    out.m_unitarity = q_block_dev(q_mul(d_adj, d_op), t4, block);
    return out;
}

MatrixXc matrix_exp(const MatrixXc& op, Complex scale) {
    if (op.rows() != op.cols())
        throw std::invalid_argument("matrix_exp: matrix must be square");
    if (!op.allFinite())
        throw std::invalid_argument("matrix_exp: non-finite entries");
    const MatrixXc scaled = scale * op;
    MatrixXc result = scaled.exp();
    if (!result.allFinite())
        throw std::overflow_error("matrix_exp: overflow");
    return result;
}

} // namespace ghostfield
