#pragma once

#include <vector>

#include "superint/potentials.hpp"

namespace superint {

// Zeros alpha_l of the parabolic polynomial Mk(z) = prod (1 - z/alpha_l).
struct ZeroConfiguration {
    std::vector<double> zeros;  // sorted ascending
    ModelV1 model;
    double residual = 0.0;
    int iterations = 0;
};

// Left side of the zero system minus its right side, per zero:
//   F_l = sum_{m != l} 2/(a_l - a_m) + (1 +- k2)/a_l - w a_l - k1/(2w).
std::vector<double> niven_equations(const ModelV1& model, const std::vector<double>& zeros);
double niven_residual(const ModelV1& model, const std::vector<double>& zeros);

enum class SeedMode { Independent, FromRecurrence };

// All n+1 configurations, one per sign pattern (q2 negative zeros, q1 positive),
// returned in ascending lambda order.
std::vector<ZeroConfiguration> solve_zero_system(const ModelV1& model, int n, SeedMode mode = SeedMode::Independent);

// Newton solve from an explicit seed; the sign pattern of the seed is kept.
ZeroConfiguration refine_zero_configuration(const ModelV1& model, std::vector<double> seed);

// lambda = 4(1 +- k2)[k1/(4w) + sum 1/alpha].
double lambda_from_zeros(const ModelV1& model, const ZeroConfiguration& cfg);

// Phi(x, y) = prod (y^2/alpha + 2x - alpha).
double product_form_eval(const ModelV1& model, const ZeroConfiguration& cfg, double x, double y);

// Phi with the Cartesian gauge exp(-w(x + k1/(4w^2))^2 - w y^2/2) y^{1/2 +- k2}.
double product_form_dressed(const ModelV1& model, const ZeroConfiguration& cfg, double x, double y);

// The constant term of the gauge-reduced operator R; R Phi = -2 E Phi.
double niven_operator_constant(const ModelV1& model);

// (R Phi + 2E Phi) at (x, y) by fourth-order central differences with step h.
double niven_operator_residual(const ModelV1& model, const ZeroConfiguration& cfg, double x, double y, double h);

}  // namespace superint
