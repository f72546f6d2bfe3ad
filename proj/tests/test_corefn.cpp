#include <cmath>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "superint/corefn.hpp"
#include "superint/errors.hpp"

using namespace superint;

namespace {

// Term-by-term sum of a terminating 2F1(-n, b; c; x), written out independently.
double hyp21_direct(int n, double b, double c, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (-n + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
    }
    return sum;
}

double binomial(double top, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= (top - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("orthogonal polynomial examples") {
    CHECK(eval_orthopoly(PolyFamily::hermite(), 2, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eval_orthopoly(PolyFamily::laguerre(1.5), 1, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(eval_orthopoly(PolyFamily::jacobi(1.5, 0.5), 1, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("low degree closed forms") {
    gen::Stream s(11);
    for (int i = 0; i < 40; ++i) {
        const double x = s.uniform(-2.0, 2.0), a = s.uniform(-0.9, 3.0), b = s.uniform(-0.9, 3.0);
        CHECK(eval_orthopoly(PolyFamily::hermite(), 3, x) == doctest::Approx(8 * x * x * x - 12 * x));
        const double l2 = 0.5 * x * x - (a + 2) * x + 0.5 * (a + 1) * (a + 2);
        CHECK(eval_orthopoly(PolyFamily::laguerre(a), 2, x) == doctest::Approx(l2));
        const double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2) * x;
        CHECK(eval_orthopoly(PolyFamily::jacobi(a, b), 1, x) == doctest::Approx(p1));
        CHECK(eval_orthopoly(PolyFamily::hermite(), 0, x) == 1.0);
    }
}

TEST_CASE("Laguerre equals the confluent series") {
    gen::Stream s(12);
    for (int i = 0; i < 40; ++i) {
        const int n = s.integer(0, 8);
        const double a = s.uniform(-0.5, 4.0), x = s.uniform(0.0, 6.0);
        const double c[] = {a + 1.0};
        const double via_1f1 = binomial(n + a, n) * hyp_finite(HypKind::OneF1, n, c, x);
        CHECK(eval_orthopoly(PolyFamily::laguerre(a), n, x) == doctest::Approx(via_1f1).epsilon(1e-10));
    }
}

TEST_CASE("hypergeometric examples") {
    const double c2[] = {2.0};
    CHECK(hyp_finite(HypKind::OneF1, 1, c2, 2.0) == doctest::Approx(0.0).scale(1.0));
    const double c3[] = {3.7};
    CHECK(hyp_finite(HypKind::OneF1, 0, c3, 5.0) == 1.0);
    const double bc[] = {4.0, 2.5};
    CHECK(hyp_finite(HypKind::TwoF1, 1, bc, 0.5) == doctest::Approx(hyp21_direct(1, 4.0, 2.5, 0.5)).epsilon(1e-15));
    CHECK(hyp21_direct(1, 4.0, 2.5, 0.5) == doctest::Approx(0.2).epsilon(1e-15));

    gen::Stream s(13);
    for (int i = 0; i < 30; ++i) {
        const int n = s.integer(0, 7);
        const double b = s.uniform(-2.0, 4.0), c = s.uniform(0.3, 5.0), x = s.uniform(-1.0, 1.0);
        const double p[] = {b, c};
        CHECK(hyp_finite(HypKind::TwoF1, n, p, x) == doctest::Approx(hyp21_direct(n, b, c, x)).epsilon(1e-12));
    }
}

TEST_CASE("hypergeometric rejects forbidden denominators") {
    const double c[] = {-1.0};
    CHECK_THROWS_AS(hyp_finite(HypKind::OneF1, 3, c, 1.0), DomainError);
    const double wrong[] = {1.0, 2.0};
    CHECK_THROWS_AS(hyp_finite(HypKind::OneF1, 1, wrong, 1.0), DomainError);
    CHECK_THROWS_AS(eval_orthopoly(PolyFamily::laguerre(-1.5), 2, 0.3), DomainError);
}

TEST_CASE("log gamma") {
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-2.5), DomainError);

    gen::Stream s(14);
    for (int i = 0; i < 50; ++i) {
        const double x = s.uniform(0.05, 60.0);
        CHECK(ln_gamma(x + 1.0) - ln_gamma(x) == doctest::Approx(std::log(x)).epsilon(1e-11));
    }
    int sign = 0;
    const double v = ln_gamma_signed(-0.5, sign);
    CHECK(sign == -1);
    CHECK(v == doctest::Approx(std::log(2.0 * std::sqrt(M_PI))).epsilon(1e-14));
    CHECK_THROWS_AS(ln_gamma_signed(-3.0, sign), DomainError);
}

TEST_CASE("pochhammer") {
    CHECK(pochhammer(3.3, 0) == 1.0);
    CHECK(pochhammer(1.0, 4) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(pochhammer(0.5, 2) == doctest::Approx(0.75).epsilon(1e-15));
    gen::Stream s(15);
    for (int i = 0; i < 30; ++i) {
        const double a = s.uniform(0.1, 10.0);
        const int k = s.integer(0, 12);
        CHECK(pochhammer(a, k) == doctest::Approx(std::exp(ln_gamma(a + k) - ln_gamma(a))).epsilon(1e-11));
    }
}
