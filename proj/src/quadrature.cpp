#include "ghostfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ghostfield {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15)
                break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// Tanh-sinh nodes/weights on [-1,1], n points.
void tanh_sinh(int n, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    const double t_max = 3.0;
    const double h = 2.0 * t_max / (n - 1);
    for (int j = 0; j < n; ++j) {
        const double t = -t_max + j * h;
        const double u = 0.5 * kPi * std::sinh(t);
        const double xj = std::tanh(u);
        const double wj =
            h * 0.5 * kPi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
        x.push_back(xj);
        w.push_back(wj);
    }
}

double integrate_once(const std::function<double(double)>& f, double k_min,
                      double k_max, int n_panels, int nodes_per_panel,
                      QuadScheme scheme) {
    std::vector<double> xs, ws;
    if (scheme == QuadScheme::CompositeGauss)
        gauss_legendre(nodes_per_panel, xs, ws);
    else
        tanh_sinh(std::max(nodes_per_panel, 6), xs, ws);
    const double width = (k_max - k_min) / n_panels;
    // compensated summation in fixed node order
    double sum = 0.0, comp = 0.0;
    for (int p = 0; p < n_panels; ++p) {
        const double a = k_min + p * width;
        const double half = 0.5 * width;
        const double mid = a + half;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double term = half * ws[i] * f(mid + half * xs[i]);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(k_min >= 0.0) || !(k_max > k_min))
        throw std::invalid_argument("QuadratureSpec: need 0 <= k_min < k_max");
    if (n_nodes < 8)
        throw std::invalid_argument("QuadratureSpec: n_nodes must be >= 8");
}

QuadratureSpec default_spec_for(double R) {
    if (!(R > 0.0))
        throw std::domain_error("default_spec_for: R must be > 0");
    QuadratureSpec spec;
    spec.k_max = 200.0 / R;
    return spec;
}

double angular_reduce(double R, double k) {
    if (!(R > 0.0) || !(k > 0.0))
        throw std::domain_error("angular_reduce: R and k must be > 0");
    const double x = k * R;
    if (x < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double sine_integral(double x) {
    if (x < 0.0)
        return -sine_integral(-x);
    if (x < 2.0) {
        // Si(x) = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        double term = x;
        double sum = x;
        for (int k = 1; k < 40; ++k) {
            term *= -x * x / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term / (2.0 * k + 1.0);
            if (std::abs(term) < 1e-18 * std::abs(sum))
                break;
        }
        return sum;
    }
    // continued fraction for E1(ix) by modified Lentz; then
    // Si(x) = pi/2 + Im(e^{-ix} h), h the CF value.
    const std::complex<double> one(1.0, 0.0);
    std::complex<double> b(1.0, x);
    std::complex<double> c(1.0 / 1e-300, 0.0);
    std::complex<double> d = one / b;
    std::complex<double> h = d;
    for (int i = 2; i <= 200; ++i) {
        const double a = -(i - 1.0) * (i - 1.0);
        b += 2.0;
        d = one / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - one) < 1e-16)
            break;
    }
    h *= std::complex<double>(std::cos(x), -std::sin(x));
    return kPi / 2.0 + h.imag();
}

double sine_integral_tail(double k_max, double R) {
    if (!(k_max * R >= 0.0))
        throw std::domain_error("sine_integral_tail: k_max*R must be >= 0");
    return kPi / 2.0 - sine_integral(k_max * R);
}

double analytic_phase(const Configuration& config, double R) {
    if (!(R > 0.0))
        throw std::domain_error("analytic_phase: R must be > 0");
    return kappa(config) * config.time / (UnitSystem::hbar * R);
}

double phase_prefactor(const Configuration& config) {
    const double g1 = coupling_g(1.0, config);
    return 8.0 * kPi * g1 * g1; // 8 pi k g(k)^2, k-independent
}

std::pair<double, double>
radial_integrate(const std::function<double(double)>& f,
                 const QuadratureSpec& spec, double align_R) {
    spec.validate();
    if (!(align_R > 0.0))
        throw std::domain_error("radial_integrate: align_R must be > 0");
    const double span = spec.k_max - spec.k_min;
    const int n_panels =
        std::max(1, static_cast<int>(std::ceil(span / (kPi / align_R))));
    const int per_panel = std::max(
        4, static_cast<int>(std::ceil(double(spec.n_nodes) / n_panels)));
    const double base = integrate_once(f, spec.k_min, spec.k_max, n_panels,
                                       per_panel, spec.scheme);
    const double refined = integrate_once(f, spec.k_min, spec.k_max, n_panels,
                                          per_panel + 2, spec.scheme);
    return {refined, std::abs(refined - base)};
}

PhaseResult coulomb_phase(const Configuration& config, const Vec3& pos_a,
                          const Vec3& pos_b, const QuadratureSpec& spec) {
    config.validate();
    spec.validate();
    const double R = (pos_a - pos_b).norm();
    if (R < 1e-9)
        throw std::domain_error("coulomb_phase: positions nearly coincident");
    const double pref = phase_prefactor(config);
    const double t = config.time;

    PhaseResult out;
    out.spec_used = spec;
    out.subtracted_constant = t * pref * (spec.k_max - spec.k_min);
    if (pref == 0.0)
        return out; // no coupling, phase identically zero

    auto integrand = [&](double k) { return pref * angular_reduce(R, k); };
    auto [value, est] = radial_integrate(integrand, spec, R);
    double tail = 0.0;
    if (spec.tail == TailRule::AnalyticSineIntegral)
        tail = pref * sine_integral_tail(spec.k_max, R) / R;
    out.phase = t * (value + tail);
    out.est_error = t * est;
    if (out.est_error > spec.rel_tol * std::abs(out.phase))
        throw ConvergenceError("coulomb_phase: quadrature did not converge "
                               "to the requested tolerance",
                               out.est_error);
    return out;
}

} // namespace ghostfield
