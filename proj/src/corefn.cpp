#include "superint/corefn.hpp"

#include <cmath>
#include <numbers>

#include "superint/errors.hpp"

namespace superint {

double eval_orthopoly(const PolyFamily& family, int degree, double x) {
    if (degree < 0) throw DomainError("eval_orthopoly: negative degree");
    switch (family.kind) {
    case PolyKind::Hermite: {
        double p0 = 1.0;
        if (degree == 0) return p0;
        double p1 = 2.0 * x;
        for (int k = 1; k < degree; ++k) {
            const double p2 = 2.0 * x * p1 - 2.0 * k * p0;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    }
    case PolyKind::Laguerre: {
        const double a = family.alpha;
        if (!(a > -1.0)) throw DomainError("Laguerre parameter must exceed -1");
        double p0 = 1.0;
        if (degree == 0) return p0;
        double p1 = 1.0 + a - x;
        for (int k = 1; k < degree; ++k) {
            const double p2 = ((2.0 * k + 1.0 + a - x) * p1 - (k + a) * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        return p1;
    }
    case PolyKind::Jacobi: {
        const double a = family.alpha, b = family.beta;
        if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Jacobi parameters must exceed -1");
        double p0 = 1.0;
        if (degree == 0) return p0;
        double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
        for (int k = 1; k < degree; ++k) {
            // DLMF 18.9.2 with n = k.
            const double n = k;
            const double s = 2.0 * n + a + b;
            const double c1 = 2.0 * (n + 1.0) * (n + a + b + 1.0) * s;
            const double c2 = (s + 1.0) * (a * a - b * b);
            const double c3 = s * (s + 1.0) * (s + 2.0);
            const double c4 = 2.0 * (n + a) * (n + b) * (s + 2.0);
            const double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    }
    }
    return 0.0;
}

namespace {

bool forbidden_denominator(double c, int n) {
    // c = 0, -1, ..., -(n-1) makes a term of the terminating series divide by zero.
    if (c > 0.0) return false;
    const double r = std::round(c);
    return r == c && -r <= n - 1;
}

}  // namespace

double hyp_finite(HypKind kind, int n, std::span<const double> params, double x) {
    if (n < 0) throw DomainError("hyp_finite: n must be nonnegative");
    double b = 1.0, c = 0.0;
    if (kind == HypKind::OneF1) {
        if (params.size() != 1) throw DomainError("1F1 expects one parameter {c}");
        c = params[0];
    } else {
        if (params.size() != 2) throw DomainError("2F1 expects two parameters {b, c}");
        b = params[0];
        c = params[1];
    }
    if (forbidden_denominator(c, n)) throw DomainError("hyp_finite: denominator parameter at a nonpositive integer");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
        double ratio = (k - n) / ((c + k) * (k + 1.0)) * x;
        if (kind == HypKind::TwoF1) ratio *= (b + k);
        term *= ratio;
        sum += term;
    }
    return sum;
}

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
    return std::lgamma(x);
}

double ln_gamma_signed(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return std::lgamma(x);
    }
    if (x == std::floor(x)) throw DomainError("ln_gamma_signed: pole of Gamma");
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    const double s = std::sin(std::numbers::pi * x);
    sign = s > 0.0 ? 1 : -1;
    return std::log(std::numbers::pi / std::fabs(s)) - std::lgamma(1.0 - x);
}

double pochhammer(double a, int s) {
    double p = 1.0;
    for (int k = 0; k < s; ++k) p *= a + k;
    return p;
}

}  // namespace superint
