#include "superint/recurrence.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "superint/corefn.hpp"
#include "superint/errors.hpp"

namespace superint {

namespace {

constexpr double kRealnessTol = 1e-9;
constexpr double kDistinctTol = 1e-9;
constexpr double kTruncationTol = 1e-8;

Eigen::MatrixXd dense_matrix(const ThreeTermRecurrence& rec) {
    const int n = rec.degree_n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int s = 0; s <= n; ++s) {
        m(s, s) = rec.diag_base[s];
        if (s < n) m(s, s + 1) = rec.super[s];
        if (s > 0) m(s, s - 1) = rec.sub[s - 1];
    }
    return m;
}

void check_well_formed(const ThreeTermRecurrence& rec) {
    const auto n = static_cast<std::size_t>(rec.degree_n);
    if (rec.degree_n < 0 || rec.diag_base.size() != n + 1 || rec.super.size() != n || rec.sub.size() != n)
        throw DomainError("malformed recurrence: sequence lengths do not match degree n");
    if (rec.lambda_weight == 0.0) throw DomainError("malformed recurrence: lambda weight is zero");
    for (double a : rec.super)
        if (a == 0.0) throw DomainError("malformed recurrence: vanishing super-diagonal coefficient");
}

// Forward recurrence with A_0 = 1; also returns dA/dlambda when requested.
void forward(const ThreeTermRecurrence& rec, double lambda, std::vector<double>& a, double& last_row,
             std::vector<double>* da = nullptr, double* dlast = nullptr) {
    const int n = rec.degree_n;
    const double kap = rec.lambda_weight;
    a.assign(n + 1, 0.0);
    a[0] = 1.0;
    if (da) da->assign(n + 1, 0.0);
    for (int s = 0; s < n; ++s) {
        const double diag = rec.diag_base[s] + kap * lambda;
        const double prev = s > 0 ? rec.sub[s - 1] * a[s - 1] : 0.0;
        a[s + 1] = -(diag * a[s] + prev) / rec.super[s];
        if (da) {
            const double dprev = s > 0 ? rec.sub[s - 1] * (*da)[s - 1] : 0.0;
            (*da)[s + 1] = -(kap * a[s] + diag * (*da)[s] + dprev) / rec.super[s];
        }
    }
    const double diag = rec.diag_base[n] + kap * lambda;
    last_row = diag * a[n] + (n > 0 ? rec.sub[n - 1] * a[n - 1] : 0.0);
    if (da && dlast) *dlast = kap * a[n] + diag * (*da)[n] + (n > 0 ? rec.sub[n - 1] * (*da)[n - 1] : 0.0);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void finish_spectrum(SeparationSpectrum& out) {
    auto& l = out.lambdas;
    std::sort(l.begin(), l.end());
    if (l.size() > 1) {
        const double diameter = std::max(l.back() - l.front(), 1.0);
        for (std::size_t i = 1; i < l.size(); ++i)
            if (l[i] - l[i - 1] <= kDistinctTol * diameter)
                throw DegeneracyError("separation spectrum has coincident eigenvalues");
    }
}

}  // namespace

ThreeTermRecurrence build_parabolic_recurrence(const ModelV1& model, Sign sign2, int n) {
    ModelV1 m = model;
    m.sign2 = sign2;
    m.validate();
    if (n < 0) throw DomainError("level n must be nonnegative");
    const double w = m.omega, k1 = m.k1, kk = m.kk2();
    ThreeTermRecurrence rec;
    rec.degree_n = n;
    rec.provenance = Provenance::Parabolic;
    rec.lambda_weight = 0.25;
    for (int s = 0; s <= n; ++s) {
        rec.diag_base.push_back(-(k1 / (4.0 * w)) * (2.0 * s + 1.0 + kk));
        if (s < n) rec.super.push_back((s + 1.0) * (s + 1.0 + kk));
        if (s > 0) rec.sub.push_back(w * (n + 1.0 - s));
    }
    rec.overflow_super = (n + 1.0) * (n + 1.0 + kk);
    return rec;
}

ThreeTermRecurrence build_parabolic_recurrence(const ModelV1& model, int n) {
    return build_parabolic_recurrence(model, model.sign2, n);
}

ThreeTermRecurrence build_elliptic_recurrence(const ModelV2& model, std::pair<Sign, Sign> signs, int n, double d2,
                                              EllipticDiagonal variant) {
    ModelV2 m = model;
    m.sign1 = signs.first;
    m.sign2 = signs.second;
    m.validate();
    if (n < 0) throw DomainError("level n must be nonnegative");
    const double a = d2 * m.omega / 4.0;
    const double kk1 = m.kk1(), kk2 = m.kk2();
    ThreeTermRecurrence rec;
    rec.degree_n = n;
    rec.provenance = Provenance::Elliptic;
    rec.lambda_weight = -0.25;
    for (int s = 0; s <= n; ++s) {
        const double c = 2.0 * s + 1.0 + kk1 + kk2;
        double d;
        if (variant == EllipticDiagonal::Rederived) {
            d = 0.25 * (0.25 * a * a + a * (2.0 * n - 4.0 * s + kk2 - kk1) - c * c);
        } else {
            d = -0.25 * (c * c + 2.0 * a * (2.0 * s - n + 4.0 + 4.0 * kk1) - a * (2.0 + kk1 + kk2) - 0.25 * a * a);
        }
        rec.diag_base.push_back(d);
        if (s < n) rec.super.push_back((s + 1.0) * (s + 1.0 + kk1));
        if (s > 0) rec.sub.push_back(-a * (n - s + 1.0));
    }
    rec.overflow_super = (n + 1.0) * (n + 1.0 + kk1);
    return rec;
}

ThreeTermRecurrence build_elliptic_recurrence(const ModelV2& model, int n, double d2, EllipticDiagonal variant) {
    return build_elliptic_recurrence(model, {model.sign1, model.sign2}, n, d2, variant);
}

SeparationSpectrum separation_eigenvalues(const ThreeTermRecurrence& rec) {
    check_well_formed(rec);
    const int n = rec.degree_n;
    const double kap = rec.lambda_weight;
    SeparationSpectrum out;
    out.recurrence = rec;
    bool symmetric = true;
    for (int s = 0; s < n; ++s)
        if (!(rec.super[s] * rec.sub[s] > 0.0)) symmetric = false;

    if (symmetric) {
        // Diagonal similarity turns super/sub into sqrt(super[s] * sub[s+1]).
        Eigen::VectorXd diag(n + 1), off(std::max(n, 0));
        for (int s = 0; s <= n; ++s) diag(s) = rec.diag_base[s];
        for (int s = 0; s < n; ++s) off(s) = std::copysign(std::sqrt(rec.super[s] * rec.sub[s]), rec.super[s]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw ConvergenceError("symmetric tridiagonal eigensolver did not converge");
        for (int i = 0; i <= n; ++i) out.lambdas.push_back(-es.eigenvalues()(i) / kap);
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(dense_matrix(rec), false);
        if (es.info() != Eigen::Success) throw ConvergenceError("Hessenberg QR eigensolver did not converge");
        double scale = 1.0;
        for (int i = 0; i <= n; ++i) scale = std::max(scale, std::abs(es.eigenvalues()(i)));
        for (int i = 0; i <= n; ++i) {
            const auto ev = es.eigenvalues()(i);
            out.max_imag_residual = std::max(out.max_imag_residual, std::fabs(ev.imag()));
            out.lambdas.push_back(-ev.real() / kap);
        }
        if (out.max_imag_residual > kRealnessTol * scale)
            throw RealnessError("separation spectrum has complex eigenvalues (imaginary part " +
                                std::to_string(out.max_imag_residual) + ")");
    }
    finish_spectrum(out);
    return out;
}

std::vector<double> unsymmetrized_eigenvalues(const ThreeTermRecurrence& rec) {
    check_well_formed(rec);
    Eigen::EigenSolver<Eigen::MatrixXd> es(dense_matrix(rec), false);
    if (es.info() != Eigen::Success) throw ConvergenceError("Hessenberg QR eigensolver did not converge");
    std::vector<double> l;
    for (int i = 0; i <= rec.degree_n; ++i) l.push_back(-es.eigenvalues()(i).real() / rec.lambda_weight);
    std::sort(l.begin(), l.end());
    return l;
}

double truncation_residual(const ThreeTermRecurrence& rec, double lambda) {
    check_well_formed(rec);
    std::vector<double> a;
    double last = 0.0;
    forward(rec, lambda, a, last);
    return std::fabs(last / rec.overflow_super) / max_abs(a);
}

std::vector<double> coefficient_vector(const ThreeTermRecurrence& rec, double lambda) {
    check_well_formed(rec);
    std::vector<double> a;
    double last = 0.0;
    forward(rec, lambda, a, last);
    const double r = std::fabs(last / rec.overflow_super) / max_abs(a);
    if (!(r <= kTruncationTol))
        throw NotEigenvalueError("lambda = " + std::to_string(lambda) + " leaves truncation residual " +
                                 std::to_string(r));
    return a;
}

double refine_eigenvalue(const ThreeTermRecurrence& rec, double lambda) {
    check_well_formed(rec);
    std::vector<double> a, da;
    double f = 0.0, df = 0.0;
    forward(rec, lambda, a, f, &da, &df);
    double best = std::fabs(f) / max_abs(a);
    for (int it = 0; it < 8 && df != 0.0; ++it) {
        const double trial = lambda - f / df;
        std::vector<double> a2, da2;
        double f2 = 0.0, df2 = 0.0;
        forward(rec, trial, a2, f2, &da2, &df2);
        const double r2 = std::fabs(f2) / max_abs(a2);
        if (!(r2 < best)) break;
        lambda = trial;
        best = r2;
        f = f2;
        df = df2;
    }
    return lambda;
}

double row_residual(const ThreeTermRecurrence& rec, double lambda, const std::vector<double>& coeffs) {
    const int n = rec.degree_n;
    double worst = 0.0;
    for (int s = 0; s <= n; ++s) {
        double r = (rec.diag_base[s] + rec.lambda_weight * lambda) * coeffs[s];
        if (s > 0) r += rec.sub[s - 1] * coeffs[s - 1];
        if (s < n) r += rec.super[s] * coeffs[s + 1];
        worst = std::max(worst, std::fabs(r));
    }
    return worst / max_abs(coeffs);
}

namespace {

struct ParabolicRow {
    double a, b, g;
};

ParabolicRow parabolic_row(const ModelV1& m, double energy, double lambda, int s) {
    const double w = m.omega, k1 = m.k1, kk = m.kk2();
    return {(s + 1.0) * (s + 1.0 + kk), 0.25 * (lambda - (k1 / w) * (2.0 * s + 1.0 + kk)),
            0.5 * (energy + k1 * k1 / (8.0 * w * w) - w * (2.0 * s + kk))};
}

}  // namespace

TailProbe tail_asymptotics_probe(const ModelV1& model, double energy, double lambda, int s_max) {
    model.validate();
    if (s_max < 50) throw DomainError("tail probe needs s_max >= 50");
    TailProbe out;
    std::vector<double> r;
    // Keep the pair (A_{s-1}, A_s) rescaled so that |A_s| = 1.
    double prev = 0.0, cur = 1.0;
    for (int s = 0; s <= s_max + 1; ++s) {
        const auto row = parabolic_row(model, energy, lambda, s);
        const double next = -(row.b * cur + row.g * prev) / row.a;
        if (cur == 0.0 || !std::isfinite(next)) throw ConvergenceError("tail probe: forward recurrence broke down");
        r.push_back(next / cur);
        const double scale = std::max(std::fabs(cur), std::fabs(next));
        prev = cur / scale;
        cur = next / scale;
    }
    const double s = s_max;
    out.limit_estimate = std::sqrt(std::fabs(r[s_max] * r[s_max + 1])) * std::pow(s * (s + 1.0), 0.25);
    out.expected_limit = std::sqrt(model.omega);
    r.pop_back();
    out.ratios = std::move(r);
    return out;
}

TailProbe tail_asymptotics_probe(const ModelV2& model, double d2, double energy, double lambda, int s_max) {
    model.validate();
    if (s_max < 50) throw DomainError("tail probe needs s_max >= 50");
    const double w = model.omega, kk1 = model.kk1(), kk2 = model.kk2();
    const double a = d2 * w / 4.0;
    const double p = 0.5 * d2 * (w * (2.0 + kk1 + kk2) - energy);
    const double lt = lambda + 0.5 * d2 * w * (1.0 + kk1) + (1.0 + kk1 + kk2) * (1.0 + kk1 + kk2) -
                      0.25 * d2 * energy - a * a / 4.0;
    auto sup = [&](int s) { return (s + 1.0) * (s + 1.0 + kk1); };
    auto dg = [&](int s) { return -(s * (s + 1.0 + kk1 + kk2) + a * s + lt / 4.0); };
    auto sb = [&](int s) { return 0.25 * (p + d2 * w * (s - 1.0)); };
    // Minimal solution: r_{s-1} = -sb(s) / (dg(s) + sup(s) r_s), started deep in the tail.
    const int top = s_max + std::max(200, s_max);
    std::vector<double> r(top + 1, 0.0);
    for (int s = top; s >= 1; --s) {
        const double den = dg(s) + sup(s) * r[s];
        if (std::fabs(den) < 1e-300) throw DegeneracyError("tail probe: vanishing denominator");
        r[s - 1] = -sb(s) / den;
    }
    r.resize(s_max + 1);
    TailProbe out;
    out.limit_estimate = r[s_max] * s_max;
    out.expected_limit = a;
    out.ratios = std::move(r);
    return out;
}

double parabolic_abs_series_log(const ModelV1& model, double energy, double lambda, int s_max, double z) {
    if (z < 0.0) throw DomainError("series is summed for z >= 0");
    double log_scale = 0.0;  // log of the factor removed from (prev, cur)
    double prev = 0.0, cur = 1.0;
    double acc = 0.0;        // running log-sum-exp
    bool started = false;
    const double lz = std::log(z);
    for (int s = 0; s <= s_max; ++s) {
        if (cur != 0.0) {
            const double term = log_scale + std::log(std::fabs(cur)) + s * lz;
            if (!started) {
                acc = term;
                started = true;
            } else {
                const double hi = std::max(acc, term);
                acc = hi + std::log(std::exp(acc - hi) + std::exp(term - hi));
            }
        }
        const auto row = parabolic_row(model, energy, lambda, s);
        const double next = -(row.b * cur + row.g * prev) / row.a;
        const double scale = std::max(std::fabs(cur), std::fabs(next));
        prev = cur / scale;
        cur = next / scale;
        log_scale += std::log(scale);
    }
    return acc;
}

double continued_fraction(const std::function<double(int)>& b, int s, int depth) {
    if (depth < 1) throw DomainError("continued fraction depth must be >= 1");
    double tail = 0.0;
    for (int k = s + depth - 1; k >= s; --k) {
        const double den = b(k) + tail;
        if (std::fabs(den) < 1e-300) throw DegeneracyError("continued fraction: vanishing denominator");
        tail = 1.0 / den;
    }
    return tail;
}

double parabolic_cf_f(const ModelV1& model, double energy, int s) {
    const double w = model.omega, kk = model.kk2();
    const double alpha = -0.5 * (energy + model.k1 * model.k1 / (8.0 * w * w));
    const double c = alpha / w + 0.5 * kk;
    int s1 = 1, s2 = 1, s3 = 1, s4 = 1, s5 = 1, s6 = 1;
    const double lg = ln_gamma_signed(0.5 * s + 0.5, s1) - ln_gamma_signed(0.5 * s + 1.0, s2) +
                      ln_gamma_signed(0.5 * (s + kk) + 0.5, s3) - ln_gamma_signed(0.5 * (s + kk) + 1.0, s4) +
                      ln_gamma_signed(0.5 * (s + c + 1.0), s5) - ln_gamma_signed(0.5 * (s + c), s6);
    return s1 * s2 * s3 * s4 * s5 * s6 * std::sqrt(0.5 * w) * std::exp(lg);
}

double parabolic_cf_b(const ModelV1& model, double energy, double lambda, int s) {
    const auto row = parabolic_row(model, energy, lambda, s);
    if (std::fabs(row.g) < 1e-300) throw DegeneracyError("continued fraction: gamma_s vanishes");
    return -row.b * parabolic_cf_f(model, energy, s) / row.g;
}

double continued_fraction_xi(const ModelV1& model, double energy, double lambda, int s, int depth) {
    model.validate();
    return continued_fraction([&](int k) { return parabolic_cf_b(model, energy, lambda, k); }, s, depth);
}

}  // namespace superint
