#pragma once

#include <string>
#include <variant>

namespace superint {

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }
std::string sign_symbol(Sign s);

// Throws BranchError when the Minus branch is requested for k >= 1/2.
void check_branch(double k, Sign s, const char* name);

struct ModelV1 {
    double omega = 1.0;
    double k1 = 0.0;
    double k2 = 1.5;
    Sign sign2 = Sign::Plus;

    void validate() const;
    double kk2() const { return sign_value(sign2) * k2; }
    double p2() const { return 0.5 + kk2(); }  // exponent of y (or of mu)
};

struct ModelV2 {
    double omega = 1.0;
    double k1 = 1.5;
    double k2 = 1.5;
    Sign sign1 = Sign::Plus;
    Sign sign2 = Sign::Plus;

    void validate() const;
    double kk1() const { return sign_value(sign1) * k1; }
    double kk2() const { return sign_value(sign2) * k2; }
    double p1() const { return 0.5 + kk1(); }
    double p2() const { return 0.5 + kk2(); }
    // The model with the two couplings exchanged.
    ModelV2 swapped() const { return {omega, k2, k1, sign2, sign1}; }
};

using Model = std::variant<ModelV1, ModelV2>;

enum class CoordSystem { Cartesian, Parabolic, Polar, Elliptic };

struct CoordinatePoint {
    CoordSystem system = CoordSystem::Cartesian;
    double u1 = 0.0;
    double u2 = 0.0;
    double d = 0.0;  // interfocal distance, elliptic only
};

struct MappedPoint {
    double x;
    double y;
    double weight;
};

double potential_value(const ModelV1& m, double x, double y);
double potential_value(const ModelV2& m, double x, double y);

double energy_level(const ModelV1& m, int n);
double energy_level(const ModelV2& m, int n);

MappedPoint coordinate_map(const CoordinatePoint& p);

// Inverse maps used when states are sampled on Cartesian grids.
// Parabolic: xi >= 0 branch (y > 0 half-plane), eta > 0.
void cartesian_to_parabolic(double x, double y, double& xi, double& eta);
// Elliptic: nu >= 0, mu in [0, pi] for y >= 0.
void cartesian_to_elliptic(double d, double x, double y, double& nu, double& mu);

// Closed-form exactly solvable bases. Values are built in log form and
// exponentiated last.
double cartesian_factor_v1_x(const ModelV1& m, int n1, double x);
double cartesian_factor_v1_y(const ModelV1& m, int n2, double y);
double cartesian_basis_v1(const ModelV1& m, int n1, int n2, double x, double y);
double cartesian_basis_v2(const ModelV2& m, int n1, int n2, double x, double y);
double polar_basis_v2(const ModelV2& m, int nr, int mq, double r, double phi);

}  // namespace superint
