#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "superint/potentials.hpp"
#include "superint/recurrence.hpp"

namespace superint {

enum class QesBasis { Parabolic, Elliptic };

struct QesSolution {
    QesBasis basis = QesBasis::Parabolic;
    Model model;
    double d2 = 0.0;
    int n = 0;
    int q = 0;  // index in ascending lambda order
    double lambda = 0.0;
    std::vector<double> coeffs;  // A_0..A_n, A_0 = 1
    std::vector<double> zeros;   // sorted ascending; in z (parabolic) or t (elliptic)
    int q1 = 0;
    int q2 = 0;
};

// Real roots of sum_s c[s] x^s (ascending coefficients) from the balanced
// companion matrix, polished by Newton. Throws RealnessError on complex pairs.
std::vector<double> polynomial_real_roots(const std::vector<double>& coeffs);
double polynomial_eval(const std::vector<double>& coeffs, double x);

// Parabolic: q1 counts zeros z > 0 (real xi axis), q2 zeros z < 0 (imaginary axis).
std::vector<QesSolution> solve_parabolic(const ModelV1& model, int n);
// Elliptic (d2 > 0): q1 counts zeros in 0 < t < 1 (angular), q2 zeros t > 1 (radial).
std::vector<QesSolution> solve_elliptic(const ModelV2& model, int n, double d2);

// Parabolic Ta on the real axis (|mu|^p even extension) and on the positive
// imaginary axis with the constant phase i^p divided out.
double parabolic_ta(const QesSolution& sol, double mu);
double parabolic_ta_imag(const QesSolution& sol, double eta);
// Elliptic Z on the real zeta axis and at zeta = i nu with i^{p2} divided out.
double elliptic_z(const QesSolution& sol, double zeta);
double elliptic_z_imag(const QesSolution& sol, double nu);

// Complex-argument view: real axis or positive imaginary axis only; the value
// carries the principal-branch phase.
std::complex<double> gauge_eval(const QesSolution& sol, std::complex<double> w);

enum class WaveBasis { CartesianV1, Parabolic, CartesianV2, Polar, Elliptic };

struct Wavefunction2D {
    WaveBasis basis = WaveBasis::CartesianV1;
    Model model;
    int n = 0;
    int label1 = 0;  // n1, q1 or n_r
    int label2 = 0;  // n2, q2 or m
    double d2 = 0.0;
    std::optional<QesSolution> qes;
    double constant = 1.0;     // C multiplying the product of factors
    bool normalized = false;   // constant fixed so that the domain integral equals target_norm
    double target_norm = 1.0;  // value of the normalization integral on the sampling domain

    double energy() const;
    // Value at a Cartesian point of the physical domain (y > 0; quadrant for V2).
    double value(double x, double y) const;
    // Value in the basis's own coordinates.
    double value_native(double u1, double u2) const;
    // value / sqrt(target_norm): unit normalized on the sampling domain.
    double unit_value(double x, double y) const { return value(x, y) / std::sqrt(target_norm); }
};

// Target norms on the sampling domains (half-plane y > 0 for V1, quadrant for V2).
double target_norm(WaveBasis basis);

Wavefunction2D make_cartesian_v1(const ModelV1& model, int n1, int n2);
Wavefunction2D make_cartesian_v2(const ModelV2& model, int n1, int n2);
Wavefunction2D make_polar(const ModelV2& model, int nr, int m);
// Unnormalized (constant = 1) QES states; throws LabelingError if no eigenstate has that split.
Wavefunction2D assemble_wavefunction_2d(const ModelV1& model, int n, int q1, int q2);
Wavefunction2D assemble_wavefunction_2d(const ModelV2& model, int n, int q1, int q2, double d2);

double elliptic_symmetry_residual(const ModelV2& model, int n, double d2);
double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b);

enum class LimitKind { PolarD0, CartesianDInf };

struct LimitReport {
    LimitKind kind = LimitKind::PolarD0;
    int n = 0;
    int q = 0;
    std::vector<double> d2;
    std::vector<double> lambdas;
    double predicted_intercept = 0.0;  // -(2m+1+K)^2 for PolarD0
    double fitted_intercept = 0.0;
    double fitted_slope = 0.0;         // coefficient of D^2
    double predicted_slope = 0.0;      // CartesianDInf: -(omega/4)(4 n1 - 2n + kk1 - kk2)
    double error = 0.0;               // PolarD0: |lambda(D2_min) - (intercept + slope D2_min)|; DInf: relative residual at probe
    double free_fit_c4 = 0.0;          // CartesianDInf: lambda = c4 D^4 + c2 D^2 fit, reported only
    double free_fit_residual = 0.0;
    int label = 0;                     // m (PolarD0) or n1 (CartesianDInf)
    bool converged = false;
};

LimitReport limit_check(const ModelV2& model, int n, int q, LimitKind kind, const std::vector<double>& d2_sequence,
                        double tolerance = 1e-3, double probe_d2 = 400.0);

struct SexticParameters {
    double beta = 0.0;
    double delta = 0.0;
    double mu2_coefficient = 0.0;
    double lambda_prime = 0.0;  // omega (2n+1), the sextic's quantization value
};

SexticParameters sextic_qes_parameters(const ModelV1& model, int n);
// Sextic potential written in (omega, beta, delta, lambda'); H = -1/2 d^2 + V.
double sextic_potential(double omega, const SexticParameters& p, double x);

}  // namespace superint
