#pragma once

#include <span>

namespace superint {

enum class PolyKind { Hermite, Laguerre, Jacobi };

struct PolyFamily {
    PolyKind kind = PolyKind::Hermite;
    double alpha = 0.0;
    double beta = 0.0;

    static PolyFamily hermite() { return {PolyKind::Hermite, 0.0, 0.0}; }
    static PolyFamily laguerre(double alpha) { return {PolyKind::Laguerre, alpha, 0.0}; }
    static PolyFamily jacobi(double alpha, double beta) { return {PolyKind::Jacobi, alpha, beta}; }
};

// H_n (physicists'), L_n^alpha or P_n^(alpha,beta) at x, by forward recurrence in n.
double eval_orthopoly(const PolyFamily& family, int degree, double x);

enum class HypKind { OneF1, TwoF1 };

// Terminating series 1F1(-n; c; x) (params = {c}) or 2F1(-n, b; c; x) (params = {b, c}).
double hyp_finite(HypKind kind, int n, std::span<const double> params, double x);

// log Gamma(x) for x > 0.
double ln_gamma(double x);

// log|Gamma(x)| for any x off the poles; sign receives the sign of Gamma(x).
double ln_gamma_signed(double x, int& sign);

// Rising factorial (a)_s.
double pochhammer(double a, int s);

}  // namespace superint
