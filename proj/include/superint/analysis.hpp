#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "superint/qes.hpp"

namespace superint {

enum class QuadRule { GaussLegendreComposite, TanhSinh };

struct QuadratureSpec {
    QuadRule rule = QuadRule::GaussLegendreComposite;
    int panels = 0;  // 0: chosen from the interval length; at least 2 otherwise
    int points_per_panel = 12;
    double radius = 0.0;  // truncation of infinite intervals; 0: chosen from the state
    double target_tol = 1e-10;
};

struct Integral {
    double value = 0.0;
    double error = 0.0;
    double magnitude = 0.0;  // integral of |f|, the scale the tolerance is relative to
};

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m);

// b may be +infinity; the interval is then [a, a + spec.radius].
Integral integrate_1d(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec = {});
Integral integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
                      const QuadratureSpec& spec = {});

// Cartesian box holding the state to below 1e-20 of its norm.
struct SamplingBox {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};
SamplingBox sampling_box(const Wavefunction2D& state);

// Integral of value^2 over the sampling domain (half-plane or quadrant).
double norm_integral(const Wavefunction2D& state, const QuadratureSpec& spec = {});
// C making the integral equal the basis's target norm.
double normalization_constant(const Wavefunction2D& state, const QuadratureSpec& spec = {});
Wavefunction2D normalized(Wavefunction2D state, const QuadratureSpec& spec = {});

// Inner products divided by sqrt(target_i target_j); states must share the sampling domain.
Eigen::MatrixXd gram_matrix(const std::vector<Wavefunction2D>& states, const QuadratureSpec& spec = {});

// Parabolic C from the term-by-term moment series of the product Ta(xi) Ta(i eta);
// terms below tol relative to the running sum end each inner sum.
double normalization_series_constant(const QesSolution& sol, double tol = 1e-14);

enum class Axis1D { Real, Imaginary };

// Unweighted overlap of two solutions with the same n along one axis, divided by
// the geometric mean of their norms. Parabolic: xi or eta on (0, inf); elliptic:
// mu on (0, pi/2) or nu on (0, inf).
double overlap_1d(const QesSolution& a, const QesSolution& b, Axis1D axis);

enum class InterbasisMethod { Projection, ClosedSum };

// u_par(q) = sum_{n1} W(q, n1) u_cart(n1, n - n1) with both families unit-normalized
// on the half-plane. Rows follow ascending lambda.
struct InterbasisMatrix {
    int n = 0;
    InterbasisMethod method = InterbasisMethod::Projection;
    Eigen::MatrixXd W;
    std::vector<std::pair<int, int>> splits;  // (q1, q2) per row
};

InterbasisMatrix interbasis_matrix(const ModelV1& model, int n, InterbasisMethod method,
                                   const QuadratureSpec& spec = {});

// The closed double-brace form as typeset, with the brace selected by the parity
// of n1 or of n. Reported only.
enum class PrintedBrace { ByN1Parity, ByNParity };
Eigen::MatrixXd interbasis_printed(const ModelV1& model, int n, PrintedBrace brace);

struct InterbasisReport {
    double closed_vs_projection = 0.0;
    double printed_n1_vs_projection = 0.0;
    double printed_n_vs_projection = 0.0;
    bool agree = false;  // closed sum within 1e-4 of projection
};
InterbasisReport interbasis_report(const ModelV1& model, int n, const QuadratureSpec& spec = {});

// ---- finite-difference oracles ----

struct OracleSpec {
    int points = 4000;      // interior grid points on the coarse grid; the fine grid doubles it
    double length = 0.0;    // 0: chosen from the gauge decay
    bool richardson = true;
};

struct OracleResult {
    std::vector<double> values;
    std::vector<double> error_estimate;  // |extrapolated - fine|
};

// Lowest `count` eigenvalues of -d^2/dx^2 + U on (0, L), Dirichlet at both ends,
// nodes at j h. Sturm-sequence bisection.
std::vector<double> dirichlet_eigenvalues(const std::function<double(double)>& potential, double length, int points,
                                          int count);

enum class OracleAxis { Real, Imaginary };

// Parabolic: real axis -d^2 + w^2 mu^6 + k1 mu^4 - 2E mu^2 + c/mu^2 has eigenvalue lambda;
// imaginary axis -d^2 + w^2 eta^6 - k1 eta^4 - 2E eta^2 + c/eta^2 has -lambda.
// Values are returned as lambda in ascending node count along the axis.
OracleResult oracle_lambda_1d(const ModelV1& model, double energy, OracleAxis axis, int count,
                              const OracleSpec& spec = {});
// Elliptic: real axis is the angular mu in (0, pi/2) (eigenvalue -lambda), imaginary
// axis the radial nu (eigenvalue lambda).
OracleResult oracle_lambda_1d(const ModelV2& model, double d2, double energy, OracleAxis axis, int count,
                              const OracleSpec& spec = {});

// Lowest eigenvalues of -1/2 d^2 + V_sextic on the half-line.
OracleResult oracle_sextic(double omega, const SexticParameters& p, int count, const OracleSpec& spec = {});

struct Oracle2DSpec {
    double h = 0.1;  // coarse spacing; the fine grid halves it
    double box_x = 0.0, box_y = 0.0;  // 0: chosen from the Gaussian decay
    int block = 0;                    // subspace size; 0: count + 8
    int max_iterations = 600;
};

// Lowest `count` eigenvalues of -1/2 Laplacian + V with the five-point stencil on the
// half-plane (V1) or quadrant (V2); shift-invert subspace iteration per grid.
OracleResult oracle_energy_2d(const Model& model, int count, const Oracle2DSpec& spec = {});

// ---- equation residuals ----

struct ResidualReport {
    double max_relative = 0.0;
    int points = 0;
};

// -T'' + U T - (eigenvalue) T for a factor on one axis by fourth-order central differences.
ResidualReport ode_residual(const QesSolution& sol, Axis1D axis, int samples = 50, double h = 1e-3);
// (-1/2 Laplacian + V - E) psi in Cartesian coordinates.
ResidualReport pde_residual(const Wavefunction2D& state, int samples = 50, double h = 1e-3);

}  // namespace superint
