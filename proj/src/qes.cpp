#include "superint/qes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "superint/corefn.hpp"
#include "superint/errors.hpp"

namespace superint {

namespace {

// Parlett-Reinsch balancing with radix 2 (exact in floating point).
void balance(Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::fabs(a(j, i));
                r += std::fabs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / 2.0, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

double polynomial_derivative(const std::vector<double>& c, double x) {
    double d = 0.0;
    for (std::size_t s = c.size(); s-- > 1;) d = d * x + s * c[s];
    return d;
}

const ModelV1& v1(const QesSolution& sol) { return std::get<ModelV1>(sol.model); }
const ModelV2& v2(const QesSolution& sol) { return std::get<ModelV2>(sol.model); }

}  // namespace

double polynomial_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t s = c.size(); s-- > 0;) v = v * x + c[s];
    return v;
}

std::vector<double> polynomial_real_roots(const std::vector<double>& coeffs) {
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg <= 0) return {};
    if (c[0] == 0.0) throw DomainError("polynomial_real_roots: zero constant term not expected here");
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
    balance(comp);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("companion eigensolver did not converge");
    std::vector<double> roots;
    for (int i = 0; i < deg; ++i) {
        const auto z = es.eigenvalues()(i);
        if (std::fabs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z)))
            throw RealnessError("polynomial has a complex zero " + std::to_string(z.real()) + " + " +
                                std::to_string(z.imag()) + "i");
        roots.push_back(z.real());
    }
    std::sort(roots.begin(), roots.end());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        double x = roots[i];
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, x - roots[i - 1]);
        if (i + 1 < roots.size()) gap = std::min(gap, roots[i + 1] - x);
        for (int it = 0; it < 4; ++it) {
            const double p = polynomial_eval(c, x), dp = polynomial_derivative(c, x);
            if (dp == 0.0) break;
            const double step = p / dp;
            if (!(std::fabs(step) < 0.25 * gap)) break;
            const double xn = x - step;
            if (!(std::fabs(polynomial_eval(c, xn)) < std::fabs(p))) break;
            x = xn;
        }
        roots[i] = x;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<QesSolution> solve_parabolic(const ModelV1& model, int n) {
    const auto rec = build_parabolic_recurrence(model, n);
    const auto spec = separation_eigenvalues(rec);
    std::vector<QesSolution> out;
    for (int q = 0; q <= n; ++q) {
        QesSolution sol;
        sol.basis = QesBasis::Parabolic;
        sol.model = model;
        sol.n = n;
        sol.q = q;
        sol.lambda = refine_eigenvalue(rec, spec.lambdas[q]);
        sol.coeffs = coefficient_vector(rec, sol.lambda);
        sol.zeros = polynomial_real_roots(sol.coeffs);
        double scale = 1.0;
        for (double z : sol.zeros) scale = std::max(scale, std::fabs(z));
        // A_0 = 1 keeps z = 0 out of the zero set, so the split is never ambiguous.
        for (double z : sol.zeros) {
            if (z > 1e-12 * scale) ++sol.q1;
            else if (z < -1e-12 * scale) ++sol.q2;
        }
        if (sol.q1 + sol.q2 != n) throw RealnessError("parabolic polynomial lost a zero");
        out.push_back(std::move(sol));
    }
    return out;
}

std::vector<QesSolution> solve_elliptic(const ModelV2& model, int n, double d2) {
    if (!(d2 > 0.0)) throw DomainError("solve_elliptic needs d2 > 0 (use separation_eigenvalues at d2 <= 0)");
    const auto rec = build_elliptic_recurrence(model, n, d2);
    const auto spec = separation_eigenvalues(rec);
    std::vector<QesSolution> out;
    for (int q = 0; q <= n; ++q) {
        QesSolution sol;
        sol.basis = QesBasis::Elliptic;
        sol.model = model;
        sol.d2 = d2;
        sol.n = n;
        sol.q = q;
        sol.lambda = refine_eigenvalue(rec, spec.lambdas[q]);
        sol.coeffs = coefficient_vector(rec, sol.lambda);
        sol.zeros = polynomial_real_roots(sol.coeffs);
        for (double t : sol.zeros) {
            if (t > 0.0 && t < 1.0) ++sol.q1;
            else if (t > 1.0) ++sol.q2;
            else throw LabelingError("elliptic polynomial has a zero outside 0 < t < inf");
        }
        if (sol.q1 + sol.q2 != n) throw RealnessError("elliptic polynomial lost a zero");
        out.push_back(std::move(sol));
    }
    return out;
}

double parabolic_ta(const QesSolution& sol, double mu) {
    const auto& m = v1(sol);
    const double w = m.omega, mu2 = mu * mu;
    const double poly = polynomial_eval(sol.coeffs, mu2);
    if (mu == 0.0) return m.p2() > 0.0 ? 0.0 : poly;
    return poly * std::exp(-0.25 * w * mu2 * mu2 - m.k1 * mu2 / (4.0 * w) + m.p2() * std::log(std::fabs(mu)));
}

double parabolic_ta_imag(const QesSolution& sol, double eta) {
    const auto& m = v1(sol);
    const double w = m.omega, e2 = eta * eta;
    const double poly = polynomial_eval(sol.coeffs, -e2);
    if (eta == 0.0) return m.p2() > 0.0 ? 0.0 : poly;
    return poly * std::exp(-0.25 * w * e2 * e2 + m.k1 * e2 / (4.0 * w) + m.p2() * std::log(std::fabs(eta)));
}

double elliptic_z(const QesSolution& sol, double zeta) {
    const auto& m = v2(sol);
    const double a = sol.d2 * m.omega / 4.0;
    const double c = std::cos(zeta), s = std::sin(zeta);
    const double poly = polynomial_eval(sol.coeffs, c * c);
    if (c == 0.0 || s == 0.0) return 0.0;
    return poly * std::exp(-0.25 * a * std::cos(2.0 * zeta) + m.p2() * std::log(std::fabs(s)) +
                           m.p1() * std::log(std::fabs(c)));
}

double elliptic_z_imag(const QesSolution& sol, double nu) {
    const auto& m = v2(sol);
    const double a = sol.d2 * m.omega / 4.0;
    const double ch = std::cosh(nu), sh = std::sinh(nu);
    const double poly = polynomial_eval(sol.coeffs, ch * ch);
    if (sh == 0.0) return m.p2() > 0.0 ? 0.0 : poly;
    return poly * std::exp(-0.25 * a * std::cosh(2.0 * nu) + m.p2() * std::log(std::fabs(sh)) + m.p1() * std::log(ch));
}

std::complex<double> gauge_eval(const QesSolution& sol, std::complex<double> w) {
    using namespace std::complex_literals;
    const double p = sol.basis == QesBasis::Parabolic ? v1(sol).p2() : v2(sol).p2();
    const std::complex<double> phase = std::exp(1i * (0.5 * std::numbers::pi * p));
    if (w.imag() == 0.0) {
        return sol.basis == QesBasis::Parabolic ? parabolic_ta(sol, w.real()) : elliptic_z(sol, w.real());
    }
    if (w.real() == 0.0 && w.imag() > 0.0) {
        const double v = sol.basis == QesBasis::Parabolic ? parabolic_ta_imag(sol, w.imag())
                                                          : elliptic_z_imag(sol, w.imag());
        return phase * v;
    }
    throw DomainError("gauge_eval: argument must lie on the real or the positive imaginary axis");
}

double target_norm(WaveBasis basis) {
    switch (basis) {
    case WaveBasis::CartesianV1:
        return 1.0;
    case WaveBasis::Parabolic:
        return 0.5;
    default:
        return 0.25;
    }
}

double Wavefunction2D::energy() const {
    return std::visit([&](const auto& m) { return energy_level(m, n); }, model);
}

double Wavefunction2D::value(double x, double y) const {
    switch (basis) {
    case WaveBasis::CartesianV1:
        return constant * cartesian_basis_v1(std::get<ModelV1>(model), label1, label2, x, y);
    case WaveBasis::CartesianV2:
        return constant * cartesian_basis_v2(std::get<ModelV2>(model), label1, label2, x, y);
    case WaveBasis::Polar:
        return constant * polar_basis_v2(std::get<ModelV2>(model), label1, label2, std::hypot(x, y), std::atan2(y, x));
    case WaveBasis::Parabolic: {
        if (!(y > 0.0)) throw DomainError("parabolic states are sampled on y > 0");
        double xi = 0.0, eta = 0.0;
        cartesian_to_parabolic(x, y, xi, eta);
        return constant * parabolic_ta(*qes, xi) * parabolic_ta_imag(*qes, eta);
    }
    case WaveBasis::Elliptic: {
        if (!(x > 0.0) || !(y > 0.0)) throw DomainError("elliptic states are sampled on the open quadrant");
        double nu = 0.0, mu = 0.0;
        cartesian_to_elliptic(std::sqrt(d2), x, y, nu, mu);
        return constant * elliptic_z(*qes, mu) * elliptic_z_imag(*qes, nu);
    }
    }
    return 0.0;
}

double Wavefunction2D::value_native(double u1, double u2) const {
    switch (basis) {
    case WaveBasis::CartesianV1:
    case WaveBasis::CartesianV2:
        return value(u1, u2);
    case WaveBasis::Polar:
        return constant * polar_basis_v2(std::get<ModelV2>(model), label1, label2, u1, u2);
    case WaveBasis::Parabolic:
        return constant * parabolic_ta(*qes, u1) * parabolic_ta_imag(*qes, u2);
    case WaveBasis::Elliptic:
        return constant * elliptic_z(*qes, u2) * elliptic_z_imag(*qes, u1);
    }
    return 0.0;
}

Wavefunction2D make_cartesian_v1(const ModelV1& model, int n1, int n2) {
    model.validate();
    if (n1 < 0 || n2 < 0) throw DomainError("quantum numbers must be nonnegative");
    Wavefunction2D wf;
    wf.basis = WaveBasis::CartesianV1;
    wf.model = model;
    wf.n = n1 + n2;
    wf.label1 = n1;
    wf.label2 = n2;
    wf.normalized = true;
    wf.target_norm = target_norm(wf.basis);
    return wf;
}

Wavefunction2D make_cartesian_v2(const ModelV2& model, int n1, int n2) {
    model.validate();
    if (n1 < 0 || n2 < 0) throw DomainError("quantum numbers must be nonnegative");
    Wavefunction2D wf;
    wf.basis = WaveBasis::CartesianV2;
    wf.model = model;
    wf.n = n1 + n2;
    wf.label1 = n1;
    wf.label2 = n2;
    wf.normalized = true;
    wf.target_norm = target_norm(wf.basis);
    return wf;
}

Wavefunction2D make_polar(const ModelV2& model, int nr, int m) {
    model.validate();
    if (nr < 0 || m < 0) throw DomainError("quantum numbers must be nonnegative");
    Wavefunction2D wf;
    wf.basis = WaveBasis::Polar;
    wf.model = model;
    wf.n = nr + m;
    wf.label1 = nr;
    wf.label2 = m;
    wf.normalized = true;
    wf.target_norm = target_norm(wf.basis);
    return wf;
}

namespace {

Wavefunction2D pick_state(std::vector<QesSolution> sols, WaveBasis basis, const Model& model, int n, int q1, int q2,
                          double d2) {
    if (q1 < 0 || q2 < 0 || q1 + q2 != n) throw LabelingError("node split must satisfy q1 + q2 = n");
    for (auto& s : sols) {
        if (s.q1 == q1 && s.q2 == q2) {
            Wavefunction2D wf;
            wf.basis = basis;
            wf.model = model;
            wf.n = n;
            wf.label1 = q1;
            wf.label2 = q2;
            wf.d2 = d2;
            wf.qes = std::move(s);
            wf.target_norm = target_norm(basis);
            return wf;
        }
    }
    throw LabelingError("no eigenstate with node split (" + std::to_string(q1) + "," + std::to_string(q2) + ")");
}

}  // namespace

Wavefunction2D assemble_wavefunction_2d(const ModelV1& model, int n, int q1, int q2) {
    return pick_state(solve_parabolic(model, n), WaveBasis::Parabolic, model, n, q1, q2, 0.0);
}

Wavefunction2D assemble_wavefunction_2d(const ModelV2& model, int n, int q1, int q2, double d2) {
    return pick_state(solve_elliptic(model, n, d2), WaveBasis::Elliptic, model, n, q1, q2, d2);
}

double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b) {
    auto directed = [](const std::vector<double>& u, const std::vector<double>& v) {
        double worst = 0.0;
        for (double x : u) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : v) best = std::min(best, std::fabs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double elliptic_symmetry_residual(const ModelV2& model, int n, double d2) {
    const auto a = separation_eigenvalues(build_elliptic_recurrence(model, n, d2)).lambdas;
    const auto b = separation_eigenvalues(build_elliptic_recurrence(model.swapped(), n, -d2)).lambdas;
    return hausdorff_distance(a, b);
}

namespace {

// Least squares for y = sum_j c_j x^j over the given powers.
Eigen::VectorXd fit_powers(const std::vector<double>& x, const std::vector<double>& y, const std::vector<int>& powers) {
    Eigen::MatrixXd a(x.size(), powers.size());
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < powers.size(); ++j) a(i, j) = std::pow(x[i], powers[j]);
        b(i) = y[i];
    }
    return a.colPivHouseholderQr().solve(b);
}

}  // namespace

LimitReport limit_check(const ModelV2& model, int n, int q, LimitKind kind, const std::vector<double>& d2_sequence,
                        double tolerance, double probe_d2) {
    model.validate();
    if (q < 0 || q > n) throw DomainError("limit_check: q out of range");
    if (d2_sequence.size() < 2) throw DomainError("limit_check: need at least two D^2 values");
    LimitReport rep;
    rep.kind = kind;
    rep.n = n;
    rep.q = q;
    rep.d2 = d2_sequence;
    auto lambda_at = [&](double d2) {
        return separation_eigenvalues(build_elliptic_recurrence(model, n, d2)).lambdas[q];
    };
    for (double d2 : d2_sequence) rep.lambdas.push_back(lambda_at(d2));
    const double w = model.omega, kk1 = model.kk1(), kk2 = model.kk2();
    if (kind == LimitKind::PolarD0) {
        // Ascending lambda runs over m = n, n-1, ..., 0.
        const int m = n - q;
        rep.label = m;
        const double c = 2.0 * m + 1.0 + kk1 + kk2;
        rep.predicted_intercept = -c * c;
        std::vector<int> powers = {0, 1};
        if (d2_sequence.size() >= 3) powers.push_back(2);
        const auto coef = fit_powers(rep.d2, rep.lambdas, powers);
        rep.fitted_intercept = coef(0);
        rep.fitted_slope = coef(1);
        const auto it = std::min_element(rep.d2.begin(), rep.d2.end());
        const std::size_t i0 = static_cast<std::size_t>(it - rep.d2.begin());
        rep.error = std::max(std::fabs(rep.lambdas[i0] - (rep.predicted_intercept + rep.fitted_slope * rep.d2[i0])),
                             std::fabs(rep.fitted_intercept - rep.predicted_intercept));
    } else {
        // Ascending lambda runs over n1 = n, n-1, ..., 0.
        const int n1 = n - q;
        rep.label = n1;
        rep.predicted_slope = -(w / 4.0) * (4.0 * n1 - 2.0 * n + kk1 - kk2);
        std::vector<double> reduced;
        for (std::size_t i = 0; i < rep.d2.size(); ++i)
            reduced.push_back(rep.lambdas[i] - rep.d2[i] * rep.d2[i] * w * w / 64.0);
        const auto coef = fit_powers(rep.d2, reduced, {0, 1});
        rep.fitted_intercept = coef(0);
        rep.fitted_slope = coef(1);
        const double lp = lambda_at(probe_d2);
        const double fit = probe_d2 * probe_d2 * w * w / 64.0 + coef(1) * probe_d2 + coef(0);
        rep.error = std::fabs(fit - lp) / std::fabs(lp);
        const auto free = fit_powers(rep.d2, rep.lambdas, {2, 1});
        rep.free_fit_c4 = free(0);
        rep.free_fit_residual = std::fabs(free(0) * probe_d2 * probe_d2 + free(1) * probe_d2 - lp) / std::fabs(lp);
    }
    rep.converged = rep.error < tolerance;
    return rep;
}

SexticParameters sextic_qes_parameters(const ModelV1& model, int n) {
    model.validate();
    const double w = model.omega, kk = model.kk2();
    SexticParameters p;
    p.beta = model.k1 / (4.0 * w * w);
    p.delta = 0.5 * (1.0 + kk);
    p.mu2_coefficient = model.k1 * model.k1 / (4.0 * w * w) - w * (4.0 * n + 4.0 + 2.0 * kk);
    p.lambda_prime = w * (2.0 * n + 1.0);
    return p;
}

double sextic_potential(double omega, const SexticParameters& p, double x) {
    const double w2 = omega * omega, x2 = x * x;
    return 0.5 * w2 * x2 * x2 * x2 + 2.0 * p.beta * w2 * x2 * x2 +
           (2.0 * p.beta * p.beta * w2 - 2.0 * p.delta * omega - p.lambda_prime) * x2 +
           2.0 * (p.delta - 0.25) * (p.delta - 0.75) / x2;
}

}  // namespace superint
