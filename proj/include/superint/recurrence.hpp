#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "superint/potentials.hpp"

namespace superint {

enum class Provenance { Parabolic, Elliptic };

// Row s (s = 0..n) of the truncated system reads
//   sub[s-1] A_{s-1} + (diag_base[s] + kappa * lambda) A_s + super[s] A_{s+1} = 0
// with A_{-1} = A_{n+1} = 0.
struct ThreeTermRecurrence {
    int degree_n = 0;
    std::vector<double> super;      // s = 0..n-1
    std::vector<double> diag_base;  // s = 0..n
    double lambda_weight = 0.0;     // kappa
    std::vector<double> sub;        // s = 1..n, stored at index s-1
    Provenance provenance = Provenance::Parabolic;
    // Coefficient that would multiply A_{n+1} in row n; used for the truncation residual.
    double overflow_super = 1.0;
};

struct SeparationSpectrum {
    std::vector<double> lambdas;
    ThreeTermRecurrence recurrence;
    double max_imag_residual = 0.0;
};

// Which diagonal to use for the elliptic recurrence. Printed is the form as
// typeset, kept only for comparison; it breaks the D^2 -> -D^2 symmetry.
enum class EllipticDiagonal { Rederived, Printed };

ThreeTermRecurrence build_parabolic_recurrence(const ModelV1& model, Sign sign2, int n);
ThreeTermRecurrence build_parabolic_recurrence(const ModelV1& model, int n);
ThreeTermRecurrence build_elliptic_recurrence(const ModelV2& model, std::pair<Sign, Sign> signs, int n, double d2,
                                              EllipticDiagonal variant = EllipticDiagonal::Rederived);
ThreeTermRecurrence build_elliptic_recurrence(const ModelV2& model, int n, double d2,
                                              EllipticDiagonal variant = EllipticDiagonal::Rederived);

SeparationSpectrum separation_eigenvalues(const ThreeTermRecurrence& rec);

// Eigenvalues of the parabolic matrix computed without symmetrization (general
// Hessenberg QR); used to cross-check the symmetric path.
std::vector<double> unsymmetrized_eigenvalues(const ThreeTermRecurrence& rec);

// Forward recurrence from A_0 = 1. Throws NotEigenvalueError when the entry
// A_{n+1} produced by the last row is not negligible.
std::vector<double> coefficient_vector(const ThreeTermRecurrence& rec, double lambda);

// Value A_{n+1} (scaled by max|A|) that the forward recurrence leaves over.
double truncation_residual(const ThreeTermRecurrence& rec, double lambda);

// Newton polish of an approximate eigenvalue on the truncation residual.
double refine_eigenvalue(const ThreeTermRecurrence& rec, double lambda);

// Max over rows of |row residual| / max|A|.
double row_residual(const ThreeTermRecurrence& rec, double lambda, const std::vector<double>& coeffs);

enum class TailBasis { Parabolic, Elliptic };

struct TailProbe {
    std::vector<double> ratios;  // r_s = A_{s+1}/A_s, s = 0..s_max
    double limit_estimate = 0.0; // sqrt|r r'| (s(s+1))^{1/4} (parabolic) or r_s * s (elliptic) at s_max
    double expected_limit = 0.0; // sqrt(omega) or D^2 omega / 4
};

// Off-spectrum (non-truncating) recurrences. Parabolic uses the series the
// forward recurrence generates from A_0 = 1; elliptic uses the minimal solution
// obtained by backward recurrence.
TailProbe tail_asymptotics_probe(const ModelV1& model, double energy, double lambda, int s_max);
TailProbe tail_asymptotics_probe(const ModelV2& model, double d2, double energy, double lambda, int s_max);

// log of sum_{s<=s_max} |A_s| z^s for the forward parabolic series at z >= 0.
double parabolic_abs_series_log(const ModelV1& model, double energy, double lambda, int s_max, double z);

// Generic finite continued fraction 1/(b_s + 1/(b_{s+1} + ... + 1/b_{s+depth-1})).
double continued_fraction(const std::function<double(int)>& b, int s, int depth);

// The b_s and f(s) of the standard form xi_s = 1/(b_s + xi_{s+1}) with
// A_s / A_{s-1} = xi_s f(s), for the off-spectrum parabolic recurrence.
double parabolic_cf_b(const ModelV1& model, double energy, double lambda, int s);
double parabolic_cf_f(const ModelV1& model, double energy, int s);
double continued_fraction_xi(const ModelV1& model, double energy, double lambda, int s, int depth);

}  // namespace superint
