#include "superint/niven.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "superint/errors.hpp"
#include "superint/qes.hpp"

namespace superint {

namespace {

void check_zeros(const std::vector<double>& zeros) {
    for (std::size_t l = 0; l < zeros.size(); ++l) {
        if (zeros[l] == 0.0 || !std::isfinite(zeros[l])) throw DomainError("Niven zeros must be finite and nonzero");
        for (std::size_t m = 0; m < l; ++m)
            if (zeros[l] == zeros[m]) throw DomainError("Niven zeros must be distinct");
    }
}

double norm2(const std::vector<double>& f) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s);
}

// Same sign pattern, strictly ordered, no near-collisions.
bool admissible(const std::vector<double>& a, const std::vector<double>& ref) {
    for (std::size_t l = 0; l < a.size(); ++l) {
        if (!std::isfinite(a[l]) || (a[l] > 0.0) != (ref[l] > 0.0) || a[l] == 0.0) return false;
        if (l > 0) {
            const double scale = std::max({1.0, std::fabs(a[l]), std::fabs(a[l - 1])});
            if (a[l] - a[l - 1] < 1e-8 * scale) return false;
        }
    }
    return true;
}

// Zeros of L_m^a by the Golub-Welsch tridiagonal.
std::vector<double> laguerre_zeros(int m, double a) {
    if (m == 0) return {};
    Eigen::VectorXd diag(m), off(std::max(m - 1, 1));
    for (int j = 0; j < m; ++j) diag(j) = 2.0 * j + a + 1.0;
    for (int j = 1; j < m; ++j) off(j - 1) = -std::sqrt(j * (j + a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off.head(m - 1), Eigen::EigenvaluesOnly);
    std::vector<double> z(es.eigenvalues().data(), es.eigenvalues().data() + m);
    return z;
}

std::vector<double> independent_seed(const ModelV1& model, int q1, int q2) {
    // Positive and negative zeros repel each other through the pair term, so each
    // group is placed like the zeros of a Laguerre family on its half-line.
    const double a = model.kk2();
    std::vector<double> seed;
    for (double x : laguerre_zeros(q2, a)) seed.push_back(-std::sqrt((x + 1.0) / model.omega));
    for (double x : laguerre_zeros(q1, a)) seed.push_back(std::sqrt((x + 1.0) / model.omega));
    std::sort(seed.begin(), seed.end());
    return seed;
}

}  // namespace

std::vector<double> niven_equations(const ModelV1& model, const std::vector<double>& a) {
    check_zeros(a);
    const double w = model.omega, c = 1.0 + model.kk2();
    std::vector<double> f(a.size());
    for (std::size_t l = 0; l < a.size(); ++l) {
        double s = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m)
            if (m != l) s += 2.0 / (a[l] - a[m]);
        f[l] = s + c / a[l] - w * a[l] - model.k1 / (2.0 * w);
    }
    return f;
}

double niven_residual(const ModelV1& model, const std::vector<double>& zeros) {
    double r = 0.0;
    for (double v : niven_equations(model, zeros)) r = std::max(r, std::fabs(v));
    return r;
}

ZeroConfiguration refine_zero_configuration(const ModelV1& model, std::vector<double> seed) {
    model.validate();
    std::sort(seed.begin(), seed.end());
    const std::vector<double> pattern = seed;
    const std::size_t n = seed.size();
    const double w = model.omega, c = 1.0 + model.kk2();
    std::mt19937_64 rng(0x5eedULL + n);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);

    ZeroConfiguration cfg;
    cfg.model = model;
    std::vector<double> a = seed;
    if (!admissible(a, pattern)) throw DomainError("Niven seed has coincident or zero entries");
    auto f = niven_equations(model, a);
    int reseeds = 0;
    for (int it = 0; it < 200; ++it) {
        cfg.iterations = it;
        double scale = 1.0;
        for (double v : a) scale = std::max(scale, std::fabs(v));
        if (norm2(f) <= 1e-13 * scale) break;
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs(n);
        for (std::size_t l = 0; l < n; ++l) {
            double d = -c / (a[l] * a[l]) - w;
            for (std::size_t m = 0; m < n; ++m) {
                if (m == l) continue;
                const double g = 2.0 / ((a[l] - a[m]) * (a[l] - a[m]));
                jac(l, m) = g;
                d -= g;
            }
            jac(l, l) = d;
            rhs(l) = -f[l];
        }
        const Eigen::VectorXd step = jac.ldlt().solve(rhs);
        double t = 1.0;
        bool moved = false;
        const double f0 = norm2(f);
        for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
            std::vector<double> trial(n);
            for (std::size_t l = 0; l < n; ++l) trial[l] = a[l] + t * step(l);
            if (!admissible(trial, pattern)) continue;
            const auto ft = niven_equations(model, trial);
            if (norm2(ft) < f0) {
                a = std::move(trial);
                f = ft;
                moved = true;
                break;
            }
        }
        if (!moved) {
            if (norm2(f) <= 1e-11 * scale) break;
            if (++reseeds > 20) break;
            for (std::size_t l = 0; l < n; ++l) a[l] = seed[l] * (1.0 + jitter(rng));
            std::sort(a.begin(), a.end());
            if (!admissible(a, pattern)) a = seed;
            f = niven_equations(model, a);
        }
    }
    cfg.zeros = a;
    cfg.residual = niven_residual(model, a);
    if (!(cfg.residual <= 1e-9)) {
        std::string s;
        for (double v : seed) s += " " + std::to_string(v);
        throw ConvergenceError("Niven Newton did not converge from seed [" + s + " ]");
    }
    return cfg;
}

std::vector<ZeroConfiguration> solve_zero_system(const ModelV1& model, int n, SeedMode mode) {
    model.validate();
    if (n < 0) throw DomainError("n must be nonnegative");
    std::vector<ZeroConfiguration> out;
    if (n == 0) {
        out.push_back({{}, model, 0.0, 0});
    } else if (mode == SeedMode::FromRecurrence) {
        for (const auto& sol : solve_parabolic(model, n)) out.push_back(refine_zero_configuration(model, sol.zeros));
    } else {
        for (int q2 = 0; q2 <= n; ++q2) out.push_back(refine_zero_configuration(model, independent_seed(model, n - q2, q2)));
    }
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
        return lambda_from_zeros(model, x) < lambda_from_zeros(model, y);
    });
    for (std::size_t i = 1; i < out.size(); ++i) {
        double d = 0.0;
        for (std::size_t l = 0; l < out[i].zeros.size(); ++l)
            d = std::max(d, std::fabs(out[i].zeros[l] - out[i - 1].zeros[l]));
        if (d < 1e-8) throw DegeneracyError("two Niven seeds converged to the same configuration");
    }
    return out;
}

double lambda_from_zeros(const ModelV1& model, const ZeroConfiguration& cfg) {
    double s = model.k1 / (4.0 * model.omega);
    for (double a : cfg.zeros) s += 1.0 / a;
    return 4.0 * (1.0 + model.kk2()) * s;
}

double product_form_eval(const ModelV1&, const ZeroConfiguration& cfg, double x, double y) {
    if (y == 0.0) throw DomainError("product form needs y != 0");
    double p = 1.0;
    for (double a : cfg.zeros) p *= y * y / a + 2.0 * x - a;
    return p;
}

double product_form_dressed(const ModelV1& model, const ZeroConfiguration& cfg, double x, double y) {
    const double w = model.omega, xs = x + model.k1 / (4.0 * w * w);
    return std::exp(-w * xs * xs - 0.5 * w * y * y + model.p2() * std::log(std::fabs(y))) *
           product_form_eval(model, cfg, x, y);
}

double niven_operator_constant(const ModelV1& model) {
    const double w = model.omega;
    return -2.0 * w * (2.0 + model.kk2()) + model.k1 * model.k1 / (4.0 * w * w);
}

double niven_operator_residual(const ModelV1& model, const ZeroConfiguration& cfg, double x, double y, double h) {
    const double w = model.omega, p = model.p2();
    const int n = static_cast<int>(cfg.zeros.size());
    auto phi = [&](double u, double v) { return product_form_eval(model, cfg, u, v); };
    auto d1 = [&](auto g) { return (-g(2) + 8.0 * g(1) - 8.0 * g(-1) + g(-2)) / (12.0 * h); };
    auto d2 = [&](auto g) { return (-g(2) + 16.0 * g(1) - 30.0 * g(0) + 16.0 * g(-1) - g(-2)) / (12.0 * h * h); };
    auto gx = [&](int j) { return phi(x + j * h, y); };
    auto gy = [&](int j) { return phi(x, y + j * h); };
    const double xs = x + model.k1 / (4.0 * w * w);
    const double r = d2(gx) + d2(gy) - 4.0 * w * xs * d1(gx) + 2.0 * (p / y - w * y) * d1(gy) +
                     niven_operator_constant(model) * phi(x, y);
    return r + 2.0 * energy_level(model, n) * phi(x, y);
}

}  // namespace superint
