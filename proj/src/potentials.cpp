#include "superint/potentials.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "superint/corefn.hpp"
#include "superint/errors.hpp"

namespace superint {

std::string sign_symbol(Sign s) { return s == Sign::Plus ? "+" : "-"; }

void check_branch(double k, Sign s, const char* name) {
    if (!(k > 0.0)) throw DomainError(std::string(name) + " must be positive");
    if (s == Sign::Minus && k >= 0.5) {
        throw BranchError(std::string("sign branch '-' is inadmissible for ") + name + " = " + std::to_string(k) +
                          ": the '+' branch is required when k >= 1/2 (both signs only for 0 < k < 1/2)");
    }
}

void ModelV1::validate() const {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    if (!std::isfinite(k1)) throw DomainError("k1 must be finite");
    check_branch(k2, sign2, "k2");
}

void ModelV2::validate() const {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    check_branch(k1, sign1, "k1");
    check_branch(k2, sign2, "k2");
}

double potential_value(const ModelV1& m, double x, double y) {
    if (y == 0.0) throw DomainError("V1 is singular on y = 0");
    const double w2 = m.omega * m.omega;
    return 0.5 * w2 * (4.0 * x * x + y * y) + m.k1 * x + (m.k2 * m.k2 - 0.25) / (2.0 * y * y);
}

double potential_value(const ModelV2& m, double x, double y) {
    if (x == 0.0 || y == 0.0) throw DomainError("V2 is singular on the coordinate axes");
    const double w2 = m.omega * m.omega;
    return 0.5 * w2 * (x * x + y * y) + 0.5 * ((m.k1 * m.k1 - 0.25) / (x * x) + (m.k2 * m.k2 - 0.25) / (y * y));
}

double energy_level(const ModelV1& m, int n) {
    return m.omega * (2.0 * n + 2.0 + m.kk2()) - m.k1 * m.k1 / (8.0 * m.omega * m.omega);
}

double energy_level(const ModelV2& m, int n) { return m.omega * (2.0 * n + 2.0 + m.kk1() + m.kk2()); }

MappedPoint coordinate_map(const CoordinatePoint& p) {
    switch (p.system) {
    case CoordSystem::Cartesian:
        return {p.u1, p.u2, 1.0};
    case CoordSystem::Parabolic:
        return {0.5 * (p.u1 * p.u1 - p.u2 * p.u2), p.u1 * p.u2, p.u1 * p.u1 + p.u2 * p.u2};
    case CoordSystem::Polar:
        return {p.u1 * std::cos(p.u2), p.u1 * std::sin(p.u2), p.u1};
    case CoordSystem::Elliptic: {
        const double h = 0.5 * p.d;
        return {h * std::cosh(p.u1) * std::cos(p.u2), h * std::sinh(p.u1) * std::sin(p.u2),
                p.d * p.d / 8.0 * (std::cosh(2.0 * p.u1) - std::cos(2.0 * p.u2))};
    }
    }
    return {0.0, 0.0, 0.0};
}

void cartesian_to_parabolic(double x, double y, double& xi, double& eta) {
    const double r = std::hypot(x, y);
    // Take the root without cancellation and recover the other from xi*eta = y.
    if (x >= 0.0) {
        xi = std::sqrt(r + x);
        eta = xi > 0.0 ? std::fabs(y) / xi : 0.0;
    } else {
        eta = std::sqrt(r - x);
        xi = std::fabs(y) / eta;
    }
}

void cartesian_to_elliptic(double d, double x, double y, double& nu, double& mu) {
    const std::complex<double> w = std::acosh(std::complex<double>(2.0 * x / d, 2.0 * y / d));
    nu = std::fabs(w.real());
    mu = std::fabs(w.imag());
}

double cartesian_factor_v1_x(const ModelV1& m, int n1, double x) {
    const double w = m.omega;
    const double z = x + m.k1 / (4.0 * w * w);
    const double lognorm = 0.25 * std::log(2.0 * w / std::numbers::pi) -
                           0.5 * (n1 * std::log(2.0) + std::lgamma(n1 + 1.0));
    const double h = eval_orthopoly(PolyFamily::hermite(), n1, std::sqrt(2.0 * w) * z);
    return h * std::exp(lognorm - w * z * z);
}

double cartesian_factor_v1_y(const ModelV1& m, int n2, double y) {
    if (!(y > 0.0)) throw DomainError("Cartesian V1 basis is defined on y > 0");
    const double w = m.omega, kk = m.kk2();
    const double lognorm = 0.5 * (std::log(2.0) + (1.0 + kk) * std::log(w) + std::lgamma(n2 + 1.0) -
                                  ln_gamma(n2 + kk + 1.0));
    const double l = eval_orthopoly(PolyFamily::laguerre(kk), n2, w * y * y);
    return l * std::exp(lognorm + m.p2() * std::log(y) - 0.5 * w * y * y);
}

double cartesian_basis_v1(const ModelV1& m, int n1, int n2, double x, double y) {
    return cartesian_factor_v1_x(m, n1, x) * cartesian_factor_v1_y(m, n2, y);
}

double cartesian_basis_v2(const ModelV2& m, int n1, int n2, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("Cartesian V2 basis is defined on the open quadrant");
    const double w = m.omega, a1 = m.kk1(), a2 = m.kk2();
    const double lognorm = 0.5 * ((2.0 + a1 + a2) * std::log(w) + std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0) -
                                  ln_gamma(n1 + a1 + 1.0) - ln_gamma(n2 + a2 + 1.0));
    const double poly = eval_orthopoly(PolyFamily::laguerre(a1), n1, w * x * x) *
                        eval_orthopoly(PolyFamily::laguerre(a2), n2, w * y * y);
    return poly * std::exp(lognorm + m.p1() * std::log(x) + m.p2() * std::log(y) - 0.5 * w * (x * x + y * y));
}

double polar_basis_v2(const ModelV2& m, int nr, int mq, double r, double phi) {
    if (!(r > 0.0) || !(phi > 0.0) || !(phi < 0.5 * std::numbers::pi))
        throw DomainError("polar V2 basis is defined for r > 0, 0 < phi < pi/2");
    const double w = m.omega, a1 = m.kk1(), a2 = m.kk2();
    const double g = 2.0 * mq + a1 + a2 + 1.0;  // radial Laguerre index
    // The angular constant mixes q and m in print; q is read as m.
    const double lograd = 0.5 * (std::log(2.0 * w) + std::lgamma(nr + 1.0) - ln_gamma(nr + g + 1.0)) +
                          g * std::log(std::sqrt(w) * r) - 0.5 * w * r * r;
    const double logang = 0.5 * (std::log(g) + std::lgamma(mq + 1.0) + ln_gamma(mq + a1 + a2 + 1.0) - std::log(2.0) -
                                 ln_gamma(mq + a2 + 1.0) - ln_gamma(mq + a1 + 1.0)) +
                          m.p1() * std::log(std::cos(phi)) + m.p2() * std::log(std::sin(phi));
    const double poly = eval_orthopoly(PolyFamily::laguerre(g), nr, w * r * r) *
                        eval_orthopoly(PolyFamily::jacobi(a2, a1), mq, std::cos(2.0 * phi));
    return poly * std::exp(lograd + logang);
}

}  // namespace superint
