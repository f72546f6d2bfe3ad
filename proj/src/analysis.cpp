#include "superint/analysis.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "superint/corefn.hpp"
#include "superint/errors.hpp"
#include "superint/parallel.hpp"

namespace superint {

namespace {

constexpr double kPi = std::numbers::pi;

double model_omega(const Model& m) {
    return std::visit([](const auto& x) { return x.omega; }, m);
}

bool is_v1(const Wavefunction2D& s) {
    return s.basis == WaveBasis::CartesianV1 || s.basis == WaveBasis::Parabolic;
}

// Smallest R with a R^2 - m log R >= budget (fixed point, R >= 1).
double gaussian_radius(double a, double m, double budget) {
    double r = std::sqrt(budget / a) + 1.0;
    for (int it = 0; it < 50; ++it) r = std::sqrt((budget + m * std::log(std::max(r, 1.0))) / a);
    return r;
}

// Smallest R with a R^4 - b R^2 - m log R >= budget.
double quartic_radius(double a, double b, double m, double budget) {
    double r = std::pow(budget / a, 0.25) + 1.0;
    for (int it = 0; it < 80; ++it)
        r = std::pow((budget + b * r * r + m * std::log(std::max(r, 1.0))) / a, 0.25);
    return r;
}

// Smallest R with (a/2) cosh(2R) - m R >= budget.
double cosh_radius(double a, double m, double budget) {
    double r = 0.5;
    for (int it = 0; it < 200; ++it) r = 0.5 * std::acosh(std::max(1.0, 2.0 * (budget + m * r) / a));
    return r;
}

std::vector<double> composite_nodes(double a, double b, int panels, int m, std::vector<double>& weights) {
    const auto [x, w] = gauss_legendre(m);
    std::vector<double> nodes;
    weights.clear();
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width, half = 0.5 * width;
        for (int i = 0; i < m; ++i) {
            nodes.push_back(mid + half * x[i]);
            weights.push_back(half * w[i]);
        }
    }
    return nodes;
}

// At least two panels, so the half-panel comparison behind the error estimate uses a different rule.
int auto_panels(double length, const QuadratureSpec& spec) {
    return spec.panels > 0 ? std::max(2, spec.panels) : std::max(8, static_cast<int>(std::ceil(length / 0.4)));
}

double gl_1d(const std::function<double(double)>& f, double a, double b, int panels, int m, double* mag = nullptr) {
    std::vector<double> w;
    const auto x = composite_nodes(a, b, panels, m, w);
    double s = 0.0, t = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = w[i] * f(x[i]);
        s += v;
        t += std::fabs(v);
    }
    if (mag) *mag = t;
    return s;
}

Integral tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
    // Abscissae measured from the nearer endpoint so that singular endpoints keep full precision.
    const double half = 0.5 * (b - a);
    double mag = 0.0;
    auto term = [&](double t) {
        const double u = 0.5 * kPi * std::sinh(t);
        const double e = std::exp(-2.0 * std::fabs(u));
        const double gap = 2.0 * e / (1.0 + e);  // 1 - |tanh u|
        const double ch = std::cosh(u);
        const double wgt = 0.5 * kPi * std::cosh(t) / (ch * ch);
        if (gap == 0.0 || !std::isfinite(wgt) || wgt == 0.0) return 0.0;
        const double x = t < 0.0 ? a + half * gap : b - half * gap;
        if (x <= a || x >= b) return 0.0;
        const double v = wgt * f(x);
        mag += std::fabs(v);
        return v;
    };
    const double tmax = 4.0;
    double h = 1.0;
    double sum = term(0.0);
    for (double t = h; t <= tmax; t += h) sum += term(t) + term(-t);
    double prev = sum * h * half;
    double estimate = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= 9; ++level) {
        h *= 0.5;
        for (double t = h; t <= tmax; t += 2.0 * h) sum += term(t) + term(-t);
        const double cur = sum * h * half;
        estimate = std::fabs(cur - prev);
        prev = cur;
        if (level >= 3 && estimate <= tol * std::max(std::fabs(cur), mag * h * half)) break;
    }
    return {prev, estimate, mag * h * half};
}

// Cross inner products of two state lists on their common sampling domain.
Eigen::MatrixXd cross_matrix(const std::vector<Wavefunction2D>& rows, const std::vector<Wavefunction2D>& cols,
                             const QuadratureSpec& spec) {
    if (rows.empty() || cols.empty()) return Eigen::MatrixXd(rows.size(), cols.size());
    const bool v1 = is_v1(rows.front());
    SamplingBox box = sampling_box(rows.front());
    auto widen = [&](const Wavefunction2D& s) {
        if (is_v1(s) != v1) throw DomainError("states do not share a sampling domain");
        const auto b = sampling_box(s);
        box.x0 = std::min(box.x0, b.x0);
        box.x1 = std::max(box.x1, b.x1);
        box.y1 = std::max(box.y1, b.y1);
    };
    for (const auto& s : rows) widen(s);
    for (const auto& s : cols) widen(s);
    const int m = spec.points_per_panel;
    std::vector<double> wx, wy;
    const auto xs = composite_nodes(box.x0, box.x1, auto_panels(box.x1 - box.x0, spec), m, wx);
    const auto ys = composite_nodes(box.y0, box.y1, auto_panels(box.y1 - box.y0, spec), m, wy);
    const std::size_t nr = rows.size(), nc = cols.size();
    std::vector<Eigen::MatrixXd> partial(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nr, nc);
        Eigen::VectorXd a(nr), b(nc);
        for (std::size_t j = 0; j < ys.size(); ++j) {
            for (std::size_t r = 0; r < nr; ++r) a(r) = rows[r].value(xs[i], ys[j]);
            for (std::size_t c = 0; c < nc; ++c) b(c) = cols[c].value(xs[i], ys[j]);
            acc.noalias() += (wx[i] * wy[j]) * a * b.transpose();
        }
        partial[i] = std::move(acc);
    });
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nr, nc);
    for (const auto& p : partial) g += p;
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) g(r, c) /= std::sqrt(rows[r].target_norm * cols[c].target_norm);
    return g;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
    if (m < 1) throw DomainError("Gauss-Legendre order must be positive");
    std::vector<double> x(m), w(m);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) p0 = 1.0;
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        x[m - 1 - i] = z;
        w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

Integral integrate_1d(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
    if (std::isinf(b)) {
        if (!(spec.radius > 0.0)) throw DomainError("infinite interval needs a positive truncation radius");
        b = a + spec.radius;
    }
    if (!(b > a)) throw DomainError("integration interval must have b > a");
    Integral out;
    if (spec.rule == QuadRule::TanhSinh) {
        out = tanh_sinh(f, a, b, spec.target_tol);
    } else {
        const int p = auto_panels(b - a, spec);
        out.value = gl_1d(f, a, b, p, spec.points_per_panel, &out.magnitude);
        out.error = std::fabs(out.value - gl_1d(f, a, b, std::max(1, p / 2), spec.points_per_panel));
    }
    if (!(out.error <= spec.target_tol * std::max(std::fabs(out.value), out.magnitude)))
        throw AccuracyError("quadrature error estimate " + std::to_string(out.error) + " above tolerance");
    return out;
}

Integral integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
                      const QuadratureSpec& spec) {
    if (!(bx > ax) || !(by > ay)) throw DomainError("integration box must be nondegenerate");
    auto rule = [&](int px, int py) {
        std::vector<double> wx, wy;
        const auto xs = composite_nodes(ax, bx, px, spec.points_per_panel, wx);
        const auto ys = composite_nodes(ay, by, py, spec.points_per_panel, wy);
        std::vector<double> rows(xs.size()), mags(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) {
            double s = 0.0, t = 0.0;
            for (std::size_t j = 0; j < ys.size(); ++j) {
                const double v = wy[j] * f(xs[i], ys[j]);
                s += v;
                t += std::fabs(v);
            }
            rows[i] = wx[i] * s;
            mags[i] = wx[i] * t;
        });
        Integral r;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            r.value += rows[i];
            r.magnitude += mags[i];
        }
        return r;
    };
    const int px = auto_panels(bx - ax, spec), py = auto_panels(by - ay, spec);
    Integral out = rule(px, py);
    out.error = std::fabs(out.value - rule(std::max(1, px / 2), std::max(1, py / 2)).value);
    if (!(out.error <= spec.target_tol * std::max(std::fabs(out.value), out.magnitude)))
        throw AccuracyError("2D quadrature error estimate " + std::to_string(out.error) + " above tolerance");
    return out;
}

SamplingBox sampling_box(const Wavefunction2D& s) {
    const double w = model_omega(s.model);
    SamplingBox box;
    if (is_v1(s)) {
        const auto& m = std::get<ModelV1>(s.model);
        const double r = gaussian_radius(w, 2.0 * (2.0 * s.n + m.p2()) + 2.0, 50.0);
        const double shift = -m.k1 / (4.0 * w * w);
        box = {shift - r, shift + r, 0.0, r};
    } else {
        const auto& m = std::get<ModelV2>(s.model);
        const double r = gaussian_radius(w, 2.0 * (2.0 * s.n + m.p1() + m.p2()) + 2.0, 50.0);
        box = {0.0, r, 0.0, r};
    }
    return box;
}

double norm_integral(const Wavefunction2D& state, const QuadratureSpec& spec) {
    const auto g = cross_matrix({state}, {state}, spec);
    return g(0, 0) * state.target_norm;
}

double normalization_constant(const Wavefunction2D& state, const QuadratureSpec& spec) {
    Wavefunction2D unit = state;
    unit.constant = 1.0;
    const double nrm = norm_integral(unit, spec);
    if (!(nrm > 0.0)) throw AccuracyError("state has vanishing norm on its sampling domain");
    return std::sqrt(state.target_norm / nrm);
}

Wavefunction2D normalized(Wavefunction2D state, const QuadratureSpec& spec) {
    state.constant = normalization_constant(state, spec);
    state.normalized = true;
    return state;
}

Eigen::MatrixXd gram_matrix(const std::vector<Wavefunction2D>& states, const QuadratureSpec& spec) {
    return cross_matrix(states, states, spec);
}

double normalization_series_constant(const QesSolution& sol, double tol) {
    if (sol.basis != QesBasis::Parabolic) throw DomainError("series normalization is implemented for parabolic states");
    const auto& m = std::get<ModelV1>(sol.model);
    const double w = m.omega, kk = m.kk2();
    const auto& a = sol.coeffs;
    // I_j = sum_{s,s'} sigma^{s+s'} A_s A_s' sum_t (c^t/t!) (1/4)(2/w)^e Gamma(e),
    // e = (1 + kk + s + s' + t + j)/2, c = -k1/(2w) on the xi axis, +k1/(2w) on eta.
    auto moment_sum = [&](double c, double base) {
        double total = 0.0;
        double peak = 0.0;
        for (int t = 0; t < 4000; ++t) {
            const double e = 0.5 * (base + t);
            const double lg = t * std::log(std::fabs(c)) - std::lgamma(t + 1.0) + e * std::log(2.0 / w) + ln_gamma(e);
            const double term = (c < 0.0 && (t % 2) ? -1.0 : 1.0) * 0.25 * std::exp(lg);
            if (c == 0.0) return 0.25 * std::exp(e * std::log(2.0 / w) + ln_gamma(e));
            total += term;
            peak = std::max(peak, std::fabs(term));
            if (t > 8 && std::fabs(term) < tol * std::fabs(total) && std::fabs(term) < 1e-3 * peak) break;
        }
        return total;
    };
    auto axis_integral = [&](double c, double sigma, int j) {
        double s = 0.0;
        for (std::size_t p = 0; p < a.size(); ++p)
            for (std::size_t q = 0; q < a.size(); ++q) {
                const double sgn = ((p + q) % 2 && sigma < 0.0) ? -1.0 : 1.0;
                s += sgn * a[p] * a[q] * moment_sum(c, 1.0 + kk + p + q + j);
            }
        return s;
    };
    const double cx = -m.k1 / (2.0 * w), ce = m.k1 / (2.0 * w);
    const double full = 2.0 * (axis_integral(cx, 1.0, 1) * axis_integral(ce, -1.0, 0) +
                               axis_integral(cx, 1.0, 0) * axis_integral(ce, -1.0, 1));
    if (!(full > 0.0)) throw AccuracyError("series normalization lost positivity");
    return 1.0 / std::sqrt(full);
}

double overlap_1d(const QesSolution& a, const QesSolution& b, Axis1D axis) {
    if (a.basis != b.basis || a.n != b.n) throw DomainError("overlap_1d needs two solutions of the same level and basis");
    std::function<double(double)> fa, fb;
    double lo = 0.0, hi = 0.0;
    if (a.basis == QesBasis::Parabolic) {
        const auto& m = std::get<ModelV1>(a.model);
        hi = quartic_radius(0.5 * m.omega, std::fabs(m.k1) / (2.0 * m.omega), 2.0 * m.p2() + 4.0 * a.n, 50.0);
        if (axis == Axis1D::Real) {
            fa = [&](double x) { return parabolic_ta(a, x); };
            fb = [&](double x) { return parabolic_ta(b, x); };
        } else {
            fa = [&](double x) { return parabolic_ta_imag(a, x); };
            fb = [&](double x) { return parabolic_ta_imag(b, x); };
        }
    } else {
        const auto& m = std::get<ModelV2>(a.model);
        if (axis == Axis1D::Real) {
            hi = 0.5 * kPi;
            fa = [&](double x) { return elliptic_z(a, x); };
            fb = [&](double x) { return elliptic_z(b, x); };
        } else {
            hi = cosh_radius(0.5 * a.d2 * m.omega / 4.0, 2.0 * (2.0 * m.p1() + 4.0 * a.n), 50.0);
            fa = [&](double x) { return elliptic_z_imag(a, x); };
            fb = [&](double x) { return elliptic_z_imag(b, x); };
        }
    }
    QuadratureSpec spec;
    spec.rule = QuadRule::TanhSinh;
    spec.target_tol = 1e-12;
    const double ab = integrate_1d([&](double x) { return fa(x) * fb(x); }, lo, hi, spec).value;
    const double aa = integrate_1d([&](double x) { return fa(x) * fa(x); }, lo, hi, spec).value;
    const double bb = integrate_1d([&](double x) { return fb(x) * fb(x); }, lo, hi, spec).value;
    return ab / std::sqrt(aa * bb);
}

InterbasisMatrix interbasis_matrix(const ModelV1& model, int n, InterbasisMethod method, const QuadratureSpec& spec) {
    model.validate();
    if (model.k1 != 0.0) throw DomainError("interbasis expansion is implemented for k1 = 0");
    const auto sols = solve_parabolic(model, n);
    InterbasisMatrix out;
    out.n = n;
    out.method = method;
    out.W = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (const auto& s : sols) out.splits.emplace_back(s.q1, s.q2);
    if (method == InterbasisMethod::Projection) {
        std::vector<Wavefunction2D> par, cart;
        for (const auto& s : sols) par.push_back(normalized(assemble_wavefunction_2d(model, n, s.q1, s.q2), spec));
        for (int n1 = 0; n1 <= n; ++n1) cart.push_back(make_cartesian_v1(model, n1, n - n1));
        out.W = cross_matrix(par, cart, spec);
        return out;
    }
    const double w = model.omega, kk = model.kk2();
    for (int r = 0; r <= n; ++r) {
        const auto& a = sols[r].coeffs;
        // Unit-normalized on the half-plane: the state's own C times sqrt(2).
        const double c = normalization_series_constant(sols[r]) * std::sqrt(2.0);
        for (int n1 = 0; n1 <= n; ++n1) {
            const int n2 = n - n1;
            const double log_n1 = 0.25 * std::log(2.0 * w / kPi) - 0.5 * (n1 * std::log(2.0) + std::lgamma(n1 + 1.0));
            const double log_n2 =
                0.5 * (std::log(2.0) + (1.0 + kk) * std::log(w) + std::lgamma(n2 + 1.0) - ln_gamma(n2 + kk + 1.0));
            const double log_l0 = ln_gamma(n2 + kk + 1.0) - ln_gamma(kk + 1.0) - std::lgamma(n2 + 1.0);
            const double log_h = 0.5 * std::log(kPi) + n1 * std::log(2.0) + std::lgamma(n1 + 1.0);
            double sum = 0.0;
            // Hermite moments: int u^s e^{-u^2} H_m du = sqrt(pi) s! / (2^{s-m} ((s-m)/2)!), s - m even >= 0.
            for (int s = n1; s <= n; s += 2) {
                const double lm = 0.5 * std::log(kPi) + std::lgamma(s + 1.0) - (s - n1) * std::log(2.0) -
                                  std::lgamma(0.5 * (s - n1) + 1.0);
                sum += a[s] * std::exp(0.5 * s * std::log(2.0 / w) + lm - log_n1 - log_n2 - log_l0 - log_h);
            }
            out.W(r, n1) = c * sum;
        }
    }
    return out;
}

Eigen::MatrixXd interbasis_printed(const ModelV1& model, int n, PrintedBrace brace) {
    model.validate();
    if (model.k1 != 0.0) throw DomainError("interbasis expansion is implemented for k1 = 0");
    const auto sols = solve_parabolic(model, n);
    const double w = model.omega, kk = model.kk2();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int r = 0; r <= n; ++r) {
        const auto& a = sols[r].coeffs;
        auto coef = [&](int i) { return (i >= 0 && i <= n) ? a[i] : 0.0; };
        const double c = normalization_series_constant(sols[r]);
        for (int n1 = 0; n1 <= n; ++n1) {
            const int n2 = n - n1;
            const double pref = c * std::pow(kPi / (2.0 * w), 0.25) *
                                std::sqrt(std::exp(ln_gamma(n2 + 1.0 + kk) - std::lgamma(n1 + 1.0) - std::lgamma(n2 + 1.0)) /
                                          (2.0 * std::pow(w, 1.0 + n1 + kk)));
            const bool even = brace == PrintedBrace::ByN1Parity ? n1 % 2 == 0 : n % 2 == 0;
            double sum = 0.0;
            if (even) {
                const int h = n1 / 2;
                for (int s = 0; s <= n - h; ++s)
                    sum += (1.0 + ((s + h) % 2 ? -1.0 : 1.0)) * coef(s + h) *
                           std::exp(std::lgamma(2.0 * s + n1 + 1.0) - s * std::log(2.0 * w) - std::lgamma(s + 1.0));
            } else {
                const int h = (n1 + 1) / 2;
                const int g = static_cast<int>(std::floor((n1 - 1) / 2.0));
                for (int s = 0; s <= n - h; ++s)
                    sum += (1.0 + (((s + g) % 2 + 2) % 2 ? -1.0 : 1.0)) * coef(s + h) *
                           std::exp(std::lgamma(2.0 * s + n1 + 2.0) - s * std::log(2.0 * w) - std::lgamma(s + 1.5));
            }
            W(r, n1) = std::sqrt(2.0) * pref * sum;
        }
    }
    return W;
}

InterbasisReport interbasis_report(const ModelV1& model, int n, const QuadratureSpec& spec) {
    const auto proj = interbasis_matrix(model, n, InterbasisMethod::Projection, spec).W;
    const auto closed = interbasis_matrix(model, n, InterbasisMethod::ClosedSum, spec).W;
    InterbasisReport rep;
    rep.closed_vs_projection = (closed - proj).cwiseAbs().maxCoeff();
    rep.printed_n1_vs_projection = (interbasis_printed(model, n, PrintedBrace::ByN1Parity) - proj).cwiseAbs().maxCoeff();
    rep.printed_n_vs_projection = (interbasis_printed(model, n, PrintedBrace::ByNParity) - proj).cwiseAbs().maxCoeff();
    rep.agree = rep.closed_vs_projection <= 1e-4;
    return rep;
}

std::vector<double> dirichlet_eigenvalues(const std::function<double(double)>& potential, double length, int points,
                                          int count) {
    if (points < 2 || count < 1 || count > points) throw DomainError("oracle grid too small for the requested count");
    const double h = length / (points + 1);
    const double off = -1.0 / (h * h);
    std::vector<double> diag(points);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = 0; j < points; ++j) {
        diag[j] = 2.0 / (h * h) + potential((j + 1) * h);
        lo = std::min(lo, diag[j] - 2.0 / (h * h));
        hi = std::max(hi, diag[j] + 2.0 / (h * h));
    }
    // Number of eigenvalues below x (Sturm sequence of the LDL^T pivots).
    auto below = [&](double x) {
        int c = 0;
        double q = diag[0] - x;
        for (int j = 0;; ++j) {
            if (q < 0.0) ++c;
            if (j + 1 == points) break;
            if (q == 0.0) q = 1e-300;
            q = diag[j + 1] - x - off * off / q;
        }
        return c;
    };
    std::vector<double> out;
    double left = lo;
    for (int k = 0; k < count; ++k) {
        double a = left, b = hi;
        for (int it = 0; it < 200 && b - a > 4e-16 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
            const double mid = 0.5 * (a + b);
            if (below(mid) > k) b = mid;
            else a = mid;
        }
        out.push_back(0.5 * (a + b));
        left = a;
    }
    return out;
}

namespace {

OracleResult extrapolate(const std::function<std::vector<double>(int)>& solve, const OracleSpec& spec) {
    // Grid with N intervals has N-1 interior nodes; doubling N halves h exactly.
    const auto coarse = solve(spec.points);
    const auto fine = solve(2 * spec.points);
    OracleResult r;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const double v = spec.richardson ? (4.0 * fine[i] - coarse[i]) / 3.0 : fine[i];
        r.values.push_back(v);
        r.error_estimate.push_back(std::fabs(v - fine[i]));
    }
    return r;
}

}  // namespace

OracleResult oracle_lambda_1d(const ModelV1& model, double energy, OracleAxis axis, int count, const OracleSpec& spec) {
    model.validate();
    const double w = model.omega, k1 = model.k1, c = model.kk2() * model.kk2() - 0.25;
    const int nguess = std::max(count, static_cast<int>(std::ceil((energy / w) / 2.0)));
    const double len = spec.length > 0.0
                           ? spec.length
                           : quartic_radius(0.5 * w, std::fabs(k1) / (2.0 * w), 2.0 * model.p2() + 4.0 * nguess, 80.0);
    const double s = axis == OracleAxis::Real ? 1.0 : -1.0;
    auto pot = [&](double x) {
        const double x2 = x * x;
        return w * w * x2 * x2 * x2 + s * k1 * x2 * x2 - 2.0 * energy * x2 + c / x2;
    };
    auto r = extrapolate([&](int n) { return dirichlet_eigenvalues(pot, len, n - 1, count); }, spec);
    if (axis == OracleAxis::Imaginary)
        for (double& v : r.values) v = -v;
    return r;
}

OracleResult oracle_lambda_1d(const ModelV2& model, double d2, double energy, OracleAxis axis, int count,
                              const OracleSpec& spec) {
    model.validate();
    if (!(d2 > 0.0)) throw DomainError("elliptic oracle needs d2 > 0");
    const double w = model.omega, a = d2 * w / 4.0;
    const double c1 = model.kk1() * model.kk1() - 0.25, c2 = model.kk2() * model.kk2() - 0.25;
    std::function<double(double)> pot;
    double len;
    if (axis == OracleAxis::Real) {
        len = 0.5 * kPi;
        pot = [=](double x) {
            const double co = std::cos(x), si = std::sin(x), c2x = std::cos(2.0 * x);
            return -0.25 * a * a * c2x * c2x + 0.25 * d2 * energy * c2x + c1 / (co * co) + c2 / (si * si);
        };
    } else {
        const int nguess = std::max(count, static_cast<int>(std::ceil((energy / w) / 2.0)));
        len = spec.length > 0.0 ? spec.length : cosh_radius(0.5 * a, 2.0 * (2.0 * model.p1() + 4.0 * nguess), 80.0);
        pot = [=](double x) {
            const double ch = std::cosh(x), sh = std::sinh(x), c2x = std::cosh(2.0 * x);
            return 0.25 * a * a * c2x * c2x - 0.25 * d2 * energy * c2x - c1 / (ch * ch) + c2 / (sh * sh);
        };
    }
    auto r = extrapolate([&](int n) { return dirichlet_eigenvalues(pot, len, n - 1, count); }, spec);
    if (axis == OracleAxis::Real)
        for (double& v : r.values) v = -v;
    return r;
}

OracleResult oracle_sextic(double omega, const SexticParameters& p, int count, const OracleSpec& spec) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    const double len = spec.length > 0.0 ? spec.length
                                         : quartic_radius(0.5 * omega, 2.0 * std::fabs(p.beta) * omega,
                                                          4.0 * count + 4.0 * p.delta + 4.0, 80.0);
    // H = -1/2 d^2 + V, so 2H is the unit-form operator handled by the generic solver.
    auto pot = [&](double x) { return 2.0 * sextic_potential(omega, p, x); };
    auto r = extrapolate([&](int n) { return dirichlet_eigenvalues(pot, len, n - 1, count); }, spec);
    for (double& v : r.values) v *= 0.5;
    for (double& v : r.error_estimate) v *= 0.5;
    return r;
}

namespace {

std::vector<double> grid_energies(const Model& model, int count, double h, double xlo, double xhi, double yhi,
                                  const Oracle2DSpec& spec) {
    const int nx = static_cast<int>(std::lround((xhi - xlo) / h)) - 1;
    const int ny = static_cast<int>(std::lround(yhi / h)) - 1;
    const int dim = nx * ny;
    auto idx = [&](int i, int j) { return j * nx + i; };
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * static_cast<std::size_t>(dim));
    double vmin = 0.0;
    const double k = 0.5 / (h * h);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double x = xlo + (i + 1) * h, y = (j + 1) * h;
            const double v = std::visit([&](const auto& m) { return potential_value(m, x, y); }, model);
            vmin = std::min(vmin, v);
            trip.emplace_back(idx(i, j), idx(i, j), 4.0 * k + v);
            if (i > 0) trip.emplace_back(idx(i, j), idx(i - 1, j), -k);
            if (i + 1 < nx) trip.emplace_back(idx(i, j), idx(i + 1, j), -k);
            if (j > 0) trip.emplace_back(idx(i, j), idx(i, j - 1), -k);
            if (j + 1 < ny) trip.emplace_back(idx(i, j), idx(i, j + 1), -k);
        }
    }
    Eigen::SparseMatrix<double> H(dim, dim);
    H.setFromTriplets(trip.begin(), trip.end());
    const double sigma = vmin - 1.0;
    Eigen::SparseMatrix<double> shifted = H;
    for (int i = 0; i < dim; ++i) shifted.coeffRef(i, i) -= sigma;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() != Eigen::Success) throw ConvergenceError("2D oracle factorization failed");

    const int b = spec.block > 0 ? spec.block : count + 8;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(dim, b);
    for (int c = 0; c < b; ++c)
        for (int i = 0; i < dim; ++i) X(i, c) = gauss(rng);
    Eigen::VectorXd theta_old = Eigen::VectorXd::Constant(b, std::numeric_limits<double>::infinity());
    for (int it = 0; it < spec.max_iterations; ++it) {
        Eigen::MatrixXd Y = ldlt.solve(X);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
        Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, b);
        Eigen::MatrixXd HQ = H * Q;
        Eigen::MatrixXd T = Q.transpose() * HQ;
        T = 0.5 * (T + T.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Eigen::VectorXd theta = es.eigenvalues();
        X = Q * es.eigenvectors();
        double change = 0.0;
        for (int i = 0; i < count; ++i) change = std::max(change, std::fabs(theta(i) - theta_old(i)) / std::max(1.0, std::fabs(theta(i))));
        theta_old = theta;
        if (change < 1e-13) return std::vector<double>(theta.data(), theta.data() + count);
    }
    throw ConvergenceError("2D oracle subspace iteration did not converge");
}

}  // namespace

OracleResult oracle_energy_2d(const Model& model, int count, const Oracle2DSpec& spec) {
    const double w = model_omega(model);
    std::visit([](const auto& m) { m.validate(); }, model);
    const double h = spec.h;
    auto snap = [&](double len) { return std::ceil(len / h) * h; };
    double xlo, xhi, yhi;
    if (std::holds_alternative<ModelV1>(model)) {
        const auto& m = std::get<ModelV1>(model);
        const double lx = snap(spec.box_x > 0.0 ? spec.box_x : 5.5 / std::sqrt(w));
        const double c = std::round(-m.k1 / (4.0 * w * w) / h) * h;
        xlo = c - lx;
        xhi = c + lx;
        yhi = snap(spec.box_y > 0.0 ? spec.box_y : 8.0 / std::sqrt(w));
    } else {
        xlo = 0.0;
        xhi = snap(spec.box_x > 0.0 ? spec.box_x : 8.0 / std::sqrt(w));
        yhi = snap(spec.box_y > 0.0 ? spec.box_y : 8.0 / std::sqrt(w));
    }
    const auto coarse = grid_energies(model, count, h, xlo, xhi, yhi, spec);
    const auto fine = grid_energies(model, count, 0.5 * h, xlo, xhi, yhi, spec);
    OracleResult r;
    for (int i = 0; i < count; ++i) {
        const double v = (4.0 * fine[i] - coarse[i]) / 3.0;
        r.values.push_back(v);
        r.error_estimate.push_back(std::fabs(v - fine[i]));
    }
    return r;
}

namespace {

double d2_central(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) / (12.0 * h * h);
}

}  // namespace

ResidualReport ode_residual(const QesSolution& sol, Axis1D axis, int samples, double h) {
    std::function<double(double)> f, pot;
    double lo, hi, eig;
    if (sol.basis == QesBasis::Parabolic) {
        const auto& m = std::get<ModelV1>(sol.model);
        const double w = m.omega, k1 = m.k1, e = energy_level(m, sol.n), c = m.kk2() * m.kk2() - 0.25;
        const double s = axis == Axis1D::Real ? 1.0 : -1.0;
        pot = [=](double x) {
            const double x2 = x * x;
            return w * w * x2 * x2 * x2 + s * k1 * x2 * x2 - 2.0 * e * x2 + c / x2;
        };
        if (axis == Axis1D::Real) f = [&](double x) { return parabolic_ta(sol, x); };
        else f = [&](double x) { return parabolic_ta_imag(sol, x); };
        eig = s * sol.lambda;
        lo = 0.2 / std::pow(w, 0.25);
        hi = 2.4 / std::pow(w, 0.25);
    } else {
        const auto& m = std::get<ModelV2>(sol.model);
        const double d2 = sol.d2, a = d2 * m.omega / 4.0, e = energy_level(m, sol.n);
        const double c1 = m.kk1() * m.kk1() - 0.25, c2 = m.kk2() * m.kk2() - 0.25;
        if (axis == Axis1D::Real) {
            pot = [=](double x) {
                const double co = std::cos(x), si = std::sin(x), c2x = std::cos(2.0 * x);
                return -0.25 * a * a * c2x * c2x + 0.25 * d2 * e * c2x + c1 / (co * co) + c2 / (si * si);
            };
            f = [&](double x) { return elliptic_z(sol, x); };
            eig = -sol.lambda;
            lo = 0.1;
            hi = 0.5 * kPi - 0.1;
        } else {
            pot = [=](double x) {
                const double ch = std::cosh(x), sh = std::sinh(x), c2x = std::cosh(2.0 * x);
                return 0.25 * a * a * c2x * c2x - 0.25 * d2 * e * c2x - c1 / (ch * ch) + c2 / (sh * sh);
            };
            f = [&](double x) { return elliptic_z_imag(sol, x); };
            eig = sol.lambda;
            lo = 0.1;
            hi = std::max(0.6, cosh_radius(0.5 * a, 2.0 * (2.0 * m.p1() + 4.0 * sol.n), 20.0));
        }
    }
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(lo, hi);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = u(rng);
        const double fx = f(x), dd = d2_central(f, x, h);
        worst = std::max(worst, std::fabs(-dd + pot(x) * fx - eig * fx));
        scale = std::max(scale, std::fabs(dd) + std::fabs(pot(x) * fx) + std::fabs(eig * fx));
    }
    return {scale > 0.0 ? worst / scale : worst, samples};
}

ResidualReport pde_residual(const Wavefunction2D& state, int samples, double h) {
    const double w = model_omega(state.model), e = state.energy();
    const double s = 1.0 / std::sqrt(w);
    double x0, x1;
    if (is_v1(state)) {
        const double c = -std::get<ModelV1>(state.model).k1 / (4.0 * w * w);
        x0 = c - 2.0 * s;
        x1 = c + 2.0 * s;
    } else {
        x0 = 0.3 * s;
        x1 = 2.5 * s;
    }
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ux(x0, x1), uy(0.3 * s, 2.5 * s);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = ux(rng), y = uy(rng);
        const double lap = d2_central([&](double t) { return state.value(t, y); }, x, h) +
                           d2_central([&](double t) { return state.value(x, t); }, y, h);
        const double v = std::visit([&](const auto& m) { return potential_value(m, x, y); }, state.model);
        const double psi = state.value(x, y);
        worst = std::max(worst, std::fabs(-0.5 * lap + (v - e) * psi));
        scale = std::max(scale, std::fabs(0.5 * lap) + std::fabs(v * psi) + std::fabs(e * psi));
    }
    return {scale > 0.0 ? worst / scale : worst, samples};
}

}  // namespace superint
