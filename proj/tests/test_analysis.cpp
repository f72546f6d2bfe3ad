#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "superint/analysis.hpp"
#include "superint/errors.hpp"

using namespace superint;

namespace {

double max_offdiag_identity(const Eigen::MatrixXd& g) {
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
    for (int m : {1, 4, 12, 20}) {
        auto [x, w] = gauss_legendre(m);
        double sum = 0.0, moment = 0.0;
        for (int i = 0; i < m; ++i) {
            sum += w[i];
            moment += w[i] * std::pow(x[i], 2 * m - 2);
        }
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(moment == doctest::Approx(2.0 / (2 * m - 1)).epsilon(1e-13));
    }
}

TEST_CASE("quadrature examples") {
    QuadratureSpec spec;
    spec.radius = 50.0;
    auto e = integrate_1d([](double x) { return std::exp(-x); }, 0.0, INFINITY, spec);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
    QuadratureSpec ts = spec;
    ts.rule = QuadRule::TanhSinh;
    auto g = integrate_1d([](double x) { return std::sqrt(x) * std::exp(-x); }, 0.0, INFINITY, ts);
    CHECK(g.value == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-10));
    auto q = integrate_2d([](double x, double y) { return std::exp(-x * x - y * y); }, 0.0, 7.0, 0.0, 7.0);
    CHECK(q.value == doctest::Approx(M_PI / 4.0).epsilon(1e-12));

    CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, 0.0, INFINITY), DomainError);
    QuadratureSpec tight;
    tight.panels = 1;
    tight.points_per_panel = 3;
    CHECK_THROWS_AS(integrate_1d([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0, tight), AccuracyError);
}

TEST_CASE("quadrature error estimates are honest") {
    gen::Stream s(61);
    for (int i = 0; i < 10; ++i) {
        const double a = s.uniform(0.5, 3.0), b = s.uniform(1.0, 8.0);
        auto f = [&](double x) { return std::exp(-a * x * x) * std::cos(b * x); };
        QuadratureSpec loose;
        loose.target_tol = 1e-8;
        QuadratureSpec tight;
        tight.target_tol = 5e-9;
        auto p = integrate_1d(f, -6.0, 6.0, loose);
        auto q = integrate_1d(f, -6.0, 6.0, tight);
        CHECK(std::fabs(p.value - q.value) <= std::max(p.error, 1e-15));
        const double exact = std::sqrt(M_PI / a) * std::exp(-b * b / (4.0 * a));
        CHECK(std::fabs(p.value - exact) <= 1e-8 * p.magnitude + 1e-15);
    }
}

TEST_CASE("Gram matrices") {
    ModelV1 m{1.0, 0.0, 1.5, Sign::Plus};
    auto g = gram_matrix({make_cartesian_v1(m, 0, 1), make_cartesian_v1(m, 1, 0)});
    CHECK(std::fabs(g(0, 1)) < 1e-12);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-10));

    std::vector<Wavefunction2D> par;
    for (int q1 = 0; q1 <= 2; ++q1) par.push_back(normalized(assemble_wavefunction_2d(m, 2, q1, 2 - q1)));
    CHECK(max_offdiag_identity(gram_matrix(par)) < 1e-8);

    ModelV2 e{1.0, 1.5, 2.5, Sign::Plus, Sign::Plus};
    std::vector<Wavefunction2D> ell, pol;
    for (int q1 = 0; q1 <= 2; ++q1) ell.push_back(normalized(assemble_wavefunction_2d(e, 2, q1, 2 - q1, 2.0)));
    for (int nr = 0; nr <= 1; ++nr) pol.push_back(make_polar(e, nr, 2 - 2 * nr));
    CHECK(max_offdiag_identity(gram_matrix(ell)) < 1e-8);
    CHECK(max_offdiag_identity(gram_matrix(pol)) < 1e-8);
}

TEST_CASE("parabolic ground state matches the Cartesian one") {
    // At n = 0 both bases hold one state; after normalization they coincide up to sign.
    ModelV1 m{1.3, 0.7, 1.5, Sign::Plus};
    auto p = normalized(assemble_wavefunction_2d(m, 0, 0, 0));
    auto c = make_cartesian_v1(m, 0, 0);
    gen::Stream s(62);
    for (int i = 0; i < 10; ++i) {
        const double x = s.uniform(-1.5, 1.0), y = s.uniform(0.2, 1.8);
        CHECK(std::fabs(p.unit_value(x, y)) == doctest::Approx(std::fabs(c.unit_value(x, y))).epsilon(1e-6));
    }
}

TEST_CASE("normalization constants") {
    // Doubling omega at k1 = 0 rescales (xi, eta) by 2^{-1/4}, so C grows by 2^{(p+1)/2}.
    for (int n : {0, 1, 2}) {
        ModelV1 a{0.8, 0.0, 1.5, Sign::Plus};
        ModelV1 b = a;
        b.omega = 1.6;
        const double ca = normalization_constant(assemble_wavefunction_2d(a, n, n, 0));
        const double cb = normalization_constant(assemble_wavefunction_2d(b, n, n, 0));
        CHECK(cb / ca == doctest::Approx(std::pow(2.0, 0.5 * (a.p2() + 1.0))).epsilon(1e-8));
    }
    // Moment series against quadrature.
    for (double k1 : {0.0, 1.0}) {
        ModelV1 m{1.0, k1, 1.5, Sign::Plus};
        for (int n = 0; n <= 2; ++n)
            for (auto& sol : solve_parabolic(m, n)) {
                const double series = normalization_series_constant(sol);
                const double quad = normalization_constant(assemble_wavefunction_2d(m, n, sol.q1, sol.q2));
                CHECK(series == doctest::Approx(quad).epsilon(1e-8));
            }
    }
    // Isotropic quadrant: k1 = k2 = 1/2 removes the centrifugal terms.
    ModelV2 iso{1.0, 0.5, 0.5, Sign::Plus, Sign::Plus};
    auto st = make_cartesian_v2(iso, 1, 0);
    CHECK(norm_integral(st) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(pde_residual(st).max_relative < 1e-6);
}

TEST_CASE("double orthogonality on each axis") {
    ModelV1 m{1.0, 0.5, 1.5, Sign::Plus};
    auto ps = solve_parabolic(m, 3);
    ModelV2 e{1.0, 1.5, 2.5, Sign::Plus, Sign::Plus};
    auto es = solve_elliptic(e, 3, 2.0);
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            CHECK(std::fabs(overlap_1d(ps[i], ps[j], Axis1D::Real)) < 1e-8);
            CHECK(std::fabs(overlap_1d(ps[i], ps[j], Axis1D::Imaginary)) < 1e-8);
            CHECK(std::fabs(overlap_1d(es[i], es[j], Axis1D::Real)) < 1e-8);
            CHECK(std::fabs(overlap_1d(es[i], es[j], Axis1D::Imaginary)) < 1e-8);
        }
    CHECK(overlap_1d(ps[1], ps[1], Axis1D::Real) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("interbasis matrices") {
    ModelV1 m{1.0, 0.0, 1.5, Sign::Plus};
    auto w0 = interbasis_matrix(m, 0, InterbasisMethod::Projection);
    CHECK(std::fabs(w0.W(0, 0)) == doctest::Approx(1.0).epsilon(1e-8));
    for (int n = 1; n <= 3; ++n) {
        auto p = interbasis_matrix(m, n, InterbasisMethod::Projection);
        auto c = interbasis_matrix(m, n, InterbasisMethod::ClosedSum);
        CHECK(max_offdiag_identity(p.W * p.W.transpose()) < 1e-8);
        CHECK((p.W - c.W).cwiseAbs().maxCoeff() < 1e-8);
    }
    CHECK(interbasis_report(m, 2).agree);
    ModelV1 bad{1.0, 0.3, 1.5, Sign::Plus};
    CHECK_THROWS_AS(interbasis_matrix(bad, 1, InterbasisMethod::ClosedSum), DomainError);
}

TEST_CASE("Dirichlet eigenvalues of the half oscillator") {
    // -d^2 + x^2 on the half-line keeps the odd levels 3, 7, 11.
    auto v = dirichlet_eigenvalues([](double x) { return x * x; }, 10.0, 8000, 3);
    CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(v[1] == doctest::Approx(7.0).epsilon(1e-5));
    CHECK(v[2] == doctest::Approx(11.0).epsilon(1e-5));
}

TEST_CASE("1D oracles") {
    ModelV1 m{1.0, 0.0, 1.5, Sign::Plus};
    auto r = oracle_lambda_1d(m, 5.5, OracleAxis::Real, 2);
    CHECK(r.values[1] == doctest::Approx(std::sqrt(40.0)).epsilon(1e-6));

    // The real axis at k1 is the imaginary axis at -k1 with lambda negated.
    ModelV1 a{1.0, 0.8, 1.5, Sign::Plus};
    ModelV1 b = a;
    b.k1 = -0.8;
    const double e = energy_level(a, 2);
    auto ra = oracle_lambda_1d(a, e, OracleAxis::Real, 3);
    auto ib = oracle_lambda_1d(b, e, OracleAxis::Imaginary, 3);
    for (int j = 0; j < 3; ++j) CHECK(ra.values[j] == doctest::Approx(-ib.values[j]).epsilon(1e-8));

    // Small D^2: the angular values approach -(2m+1+k1+k2)^2.
    ModelV2 v{1.0, 1.5, 1.5, Sign::Plus, Sign::Plus};
    auto ang = oracle_lambda_1d(v, 1e-3, energy_level(v, 1), OracleAxis::Real, 2);
    CHECK(ang.values[0] == doctest::Approx(-16.0).epsilon(1e-4));
    CHECK(ang.values[1] == doctest::Approx(-36.0).epsilon(1e-4));

    // Node-compatible subsets of the determinant spectrum.
    ModelV2 g{1.2, 1.5, 2.5, Sign::Plus, Sign::Plus};
    const double d2 = 3.0;
    auto sols = solve_elliptic(g, 2, d2);
    auto real = oracle_lambda_1d(g, d2, energy_level(g, 2), OracleAxis::Real, 3);
    auto imag = oracle_lambda_1d(g, d2, energy_level(g, 2), OracleAxis::Imaginary, 3);
    for (auto& s : sols) {
        CHECK(real.values[s.q1] == doctest::Approx(s.lambda).epsilon(1e-6));
        CHECK(imag.values[s.q2] == doctest::Approx(s.lambda).epsilon(1e-6));
    }
}

TEST_CASE("2D oracle ground level") {
    ModelV2 v{1.0, 1.5, 1.5, Sign::Plus, Sign::Plus};
    auto r = oracle_energy_2d(v, 1);
    CHECK(r.values[0] == doctest::Approx(5.0).epsilon(1e-3));
}

TEST_CASE("sextic oracle") {
    ModelV1 m{1.0, 0.0, 1.5, Sign::Plus};
    auto sols = solve_parabolic(m, 1);
    // Twice the sextic energy is the real-axis separation constant.
    auto r = oracle_sextic(m.omega, sextic_qes_parameters(m, 1), 2);
    for (int j = 0; j < 2; ++j) CHECK(2.0 * r.values[j] == doctest::Approx(sols[j].lambda).epsilon(1e-5));
}

TEST_CASE("equation residuals") {
    gen::Stream s(63);
    for (int i = 0; i < 4; ++i) {
        ModelV1 g = gen::model_v1(s);
        const int n = s.integer(0, 3);
        for (auto& sol : solve_parabolic(g, n)) {
            CHECK(ode_residual(sol, Axis1D::Real).max_relative < 1e-6);
            CHECK(ode_residual(sol, Axis1D::Imaginary).max_relative < 1e-6);
            CHECK(pde_residual(assemble_wavefunction_2d(g, n, sol.q1, sol.q2)).max_relative < 1e-6);
        }
        ModelV2 e = gen::model_v2(s);
        const double d2 = s.uniform(0.5, 6.0);
        for (auto& sol : solve_elliptic(e, n, d2)) {
            CHECK(ode_residual(sol, Axis1D::Real).max_relative < 1e-6);
            CHECK(ode_residual(sol, Axis1D::Imaginary).max_relative < 1e-6);
            CHECK(pde_residual(assemble_wavefunction_2d(e, n, sol.q1, sol.q2, d2)).max_relative < 1e-6);
        }
    }
}
