#include <doctest.h>

#include "ghostfield/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace ghostfield;

namespace {

Configuration make_config(CouplingKind kind, double q, double R, double t) {
    Configuration c;
    c.coupling_kind = kind;
    c.charge_value = q;
    c.positions_a = {Vec3(0, 0, 0)};
    c.positions_b = {Vec3(R, 0, 0)};
    c.time = t;
    return c;
}

} // namespace

TEST_CASE("angular reduction is the radial sinc") {
    CHECK(angular_reduce(1.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(angular_reduce(1.0, std::numbers::pi)) < 1e-15);
    CHECK(angular_reduce(1.0, 1.0) ==
          doctest::Approx(0.84147098480789650665).epsilon(1e-14));
    CHECK_THROWS_AS(angular_reduce(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(angular_reduce(1.0, 0.0), std::domain_error);
}

TEST_CASE("sine integral against frozen high-precision references") {
    CHECK(std::abs(sine_integral(0.5) - 0.49310741804306668916) < 1e-12);
    CHECK(std::abs(sine_integral(2.0) - 1.6054129768026948486) < 1e-12);
    CHECK(std::abs(sine_integral(4.0) - 1.7582031389490530581) < 1e-12);
    CHECK(std::abs(sine_integral(10.0) - 1.6583475942188740493) < 1e-12);
    CHECK(std::abs(sine_integral(20.0) - 1.5482417010434398402) < 1e-12);
    CHECK(std::abs(sine_integral(100.0) - 1.5622254668890562934) < 1e-12);
    CHECK(sine_integral(-2.0) ==
          doctest::Approx(-1.6054129768026948486).epsilon(1e-12));
}

TEST_CASE("analytic tail values") {
    CHECK(sine_integral_tail(0.0, 1.0) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
    CHECK(std::abs(sine_integral_tail(10.0, 1.0) -
                   (-0.0875512674239774301)) < 1e-12);
    // tail decays like cos(x)/x
    CHECK(std::abs(sine_integral_tail(1000.0, 1.0)) < 2e-3);
}

TEST_CASE("numerical phase reproduces the inverse-distance law") {
    for (double R : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        for (double t : {0.1, 1.0, 10.0}) {
            const Configuration c = make_config(CouplingKind::EM, 1.0, R, t);
            const QuadratureSpec spec = default_spec_for(R);
            const PhaseResult r = coulomb_phase(c, c.positions_a[0],
                                                c.positions_b[0], spec);
            const double expect = analytic_phase(c, R);
            CHECK(std::abs(r.phase - expect) <= 1e-6 * expect);
        }
    }
}

TEST_CASE("zero charge gives exactly zero phase") {
    const Configuration c = make_config(CouplingKind::EM, 0.0, 1.0, 5.0);
    const PhaseResult r = coulomb_phase(c, c.positions_a[0],
                                        c.positions_b[0], default_spec_for(1.0));
    CHECK(r.phase == 0.0);
    CHECK(r.est_error == 0.0);
}

TEST_CASE("halving the separation doubles the phase") {
    const Configuration c1 = make_config(CouplingKind::EM, 1.0, 1.0, 1.0);
    const Configuration c2 = make_config(CouplingKind::EM, 1.0, 2.0, 1.0);
    const double p1 = coulomb_phase(c1, c1.positions_a[0], c1.positions_b[0],
                                    default_spec_for(1.0))
                          .phase;
    const double p2 = coulomb_phase(c2, c2.positions_a[0], c2.positions_b[0],
                                    default_spec_for(2.0))
                          .phase;
    CHECK(p1 / p2 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("without the analytic tail the cutoff error decays like 1/k_max") {
    const double R = 1.0, t = 1.0;
    const Configuration c = make_config(CouplingKind::EM, 1.0, R, t);
    const double expect = analytic_phase(c, R);
    for (double k_max : {20.0, 40.0, 80.0}) {
        QuadratureSpec spec = default_spec_for(R);
        spec.k_max = k_max;
        spec.tail = TailRule::None;
        spec.rel_tol = 1.0; // the truncated tail, not quadrature, dominates
        const PhaseResult r =
            coulomb_phase(c, c.positions_a[0], c.positions_b[0], spec);
        const double err = std::abs(r.phase - expect);
        const double pref = phase_prefactor(c);
        // |tail| <= ~2 pref / (k_max R) with 10% slack for the Si wiggle
        CHECK(err < 2.2 * pref * t / (k_max * R));
        CHECK(err > 0.0);
    }
}

TEST_CASE("subtracted self-energy constant is linear in the cutoff and "
          "independent of the separation") {
    const Configuration c = make_config(CouplingKind::EM, 1.0, 1.0, 2.0);
    QuadratureSpec s1 = default_spec_for(1.0);
    s1.k_max = 50.0;
    QuadratureSpec s2 = s1;
    s2.k_max = 100.0;
    const PhaseResult r1 =
        coulomb_phase(c, c.positions_a[0], c.positions_b[0], s1);
    const PhaseResult r2 =
        coulomb_phase(c, c.positions_a[0], c.positions_b[0], s2);
    CHECK(r2.subtracted_constant ==
          doctest::Approx(2.0 * r1.subtracted_constant).epsilon(1e-12));
    // a different separation, same cutoff: identical constant
    const Configuration c5 = make_config(CouplingKind::EM, 1.0, 5.0, 2.0);
    const PhaseResult r5 =
        coulomb_phase(c5, c5.positions_a[0], c5.positions_b[0], s1);
    CHECK(std::abs(r5.subtracted_constant - r1.subtracted_constant) < 1e-8);
}

TEST_CASE("matched coupling constants make gravity and EM phases agree") {
    const double m = 1.0;
    const double q = std::sqrt(4.0 * std::numbers::pi) * m;
    const Configuration cg = make_config(CouplingKind::Gravity, m, 1.5, 2.0);
    const Configuration ce = make_config(CouplingKind::EM, q, 1.5, 2.0);
    CHECK(std::abs(kappa(cg) - kappa(ce)) < 1e-14);
    const QuadratureSpec spec = default_spec_for(1.5);
    const double pg =
        coulomb_phase(cg, cg.positions_a[0], cg.positions_b[0], spec).phase;
    const double pe =
        coulomb_phase(ce, ce.positions_a[0], ce.positions_b[0], spec).phase;
    CHECK(std::abs(pg - pe) <= 1e-12 * std::abs(pg));
}

TEST_CASE("gravity phase equals G m^2 t / R") {
    const Configuration c = make_config(CouplingKind::Gravity, 2.0, 4.0, 3.0);
    const PhaseResult r = coulomb_phase(c, c.positions_a[0],
                                        c.positions_b[0], default_spec_for(4.0));
    CHECK(r.phase == doctest::Approx(4.0 * 3.0 / 4.0).epsilon(1e-6));
}

TEST_CASE("spec validation and convergence guard") {
    QuadratureSpec bad;
    bad.k_max = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    QuadratureSpec few = default_spec_for(1.0);
    few.n_nodes = 4;
    CHECK_THROWS_AS(few.validate(), std::invalid_argument);

    const Configuration c = make_config(CouplingKind::EM, 1.0, 1.0, 1.0);
    QuadratureSpec strict = default_spec_for(1.0);
    strict.rel_tol = 1e-15; // beyond what the node budget can certify
    CHECK_THROWS_AS(
        coulomb_phase(c, c.positions_a[0], c.positions_b[0], strict),
        ConvergenceError);
}

TEST_CASE("alternative node placement scheme integrates smooth panels") {
    const Configuration c = make_config(CouplingKind::EM, 1.0, 1.0, 1.0);
    QuadratureSpec spec = default_spec_for(1.0);
    spec.scheme = QuadScheme::TanhSinh;
    spec.n_nodes = 2048;
    spec.rel_tol = 1e-3;
    const PhaseResult r =
        coulomb_phase(c, c.positions_a[0], c.positions_b[0], spec);
    CHECK(std::abs(r.phase - analytic_phase(c, 1.0)) <
          1e-3 * analytic_phase(c, 1.0));
}
