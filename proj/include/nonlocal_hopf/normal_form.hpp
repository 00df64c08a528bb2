#pragma once

#include <array>
#include <complex>

#include "nonlocal_hopf/hopf.hpp"
#include "nonlocal_hopf/model.hpp"

namespace nlhopf {

using cplx = std::complex<double>;

/// Critical eigenvectors at a mode-1 Hopf point.
///   q  = (1, q2)^T cos(x/ell)
///   q* = 2/(ell pi conj(D)) (1, q2_star)^T cos(x/ell)
/// normalized so that <q*, q> = 1 and <q*, conj(q)> = 0.
struct EigenData {
    double lambda_star = 0.0;
    double omega_star = 0.0;
    cplx q2;
    cplx q2_star;
    cplx D;
    double ell = 0.0;
};

/// Taylor coefficients of the kinetics about (lambda, lambda) up to cubic
/// order, in the shifted variables (u, v).  The u-equation additionally
/// carries the nonlocal quadratic term -beta * u * mean(u).
struct KineticTaylor {
    // u-equation: uu, uv, uuu, uuv
    double f_uu = 0.0, f_uv = 0.0, f_uuu = 0.0, f_uuv = 0.0;
    double nonlocal = 0.0;  // coefficient of u * mean(u)
    // v-equation: uu, vv, uv, uuu, uuv, uvv
    double g_uu = 0.0, g_vv = 0.0, g_uv = 0.0, g_uuu = 0.0, g_uuv = 0.0, g_uvv = 0.0;
};

KineticTaylor kinetic_taylor(double lambda, const ModelParams& params);

/// Quadratic-order coefficients h20 = (gamma1, gamma2) cos^2 and
/// h11 = (gamma3, gamma4) cos^2 of the center-manifold equation.
struct CenterManifoldCoeffs {
    std::array<cplx, 4> gamma{};
    /// w20 = (a1, a2) cos(2x/ell) + (a3, a4)
    std::array<cplx, 4> a{};
    /// w11 = (b1, b2) cos(2x/ell) + (b3, b4); real up to rounding
    std::array<cplx, 4> b{};
};

struct G21Breakdown {
    cplx g20, g11, g02;  // vanish; evaluated by quadrature
    cplx A1, A2, A3;     // w11 part, cubic part, w20 part
    cplx g21;
    CenterManifoldCoeffs coeffs;
};

enum class Direction { forward, backward };  // orbits for lambda > lambda* / lambda < lambda*
enum class OrbitStability { stable, unstable };

struct HopfNormalForm {
    double lambda_star = 0.0;
    double b_star = 0.0;
    cplx g21;
    cplx C1;  // g21 / 2
    double mu2 = 0.0;
    double beta2 = 0.0;
    double transversality = 0.0;
    Direction direction = Direction::forward;
    /// The same direction in b, which decreases as lambda increases.
    Direction direction_in_b = Direction::backward;
    OrbitStability orbit_stability = OrbitStability::stable;
};

std::string to_string(Direction d);
std::string to_string(OrbitStability s);

struct NormalizationResiduals {
    cplx qs_q_minus_one;  // <q*, q> - 1
    cplx qs_qbar;         // <q*, conj(q)>
};

EigenData eigen_data(const HopfPoint& point, const ModelParams& params);
EigenData eigen_data(double lambda_star, const ModelParams& params);

/// Inner products of the eigenvectors by midpoint quadrature on `nodes` cells.
NormalizationResiduals normalization_residuals(const EigenData& ed, const ModelParams& params, int nodes = 10000);

std::array<cplx, 4> gamma_coeffs(const EigenData& ed, const ModelParams& params);
CenterManifoldCoeffs ab_coeffs(const EigenData& ed, const std::array<cplx, 4>& gamma, const ModelParams& params);

/// g20, g11, g02 by quadrature of the quadratic part against q*.
std::array<cplx, 3> quadratic_coefficients(const EigenData& ed, const ModelParams& params, int nodes = 10000);

G21Breakdown g21_finite(const HopfPoint& point, const ModelParams& params);
HopfNormalForm normal_form(const HopfPoint& point, const ModelParams& params);

enum class Branch { plus, minus };

/// ell -> infinity limits at the Hopf point of the chosen branch.
struct AsymptoticLimits {
    Branch branch = Branch::plus;
    double lambda_inf = 0.0;
    double omega_inf = 0.0;
    double b_inf = 0.0;
    cplx q2, q2_star, D;
    std::array<cplx, 4> gamma{};
    std::array<cplx, 4> a{};
    std::array<cplx, 4> b{};
    /// A1..A3 obtained by passing the limits through the finite-ell formulas.
    cplx A1, A2, A3;
    /// Closed-form real parts.
    double re_A1 = 0.0, re_A2 = 0.0, re_A3 = 0.0;
    /// A3 split into five pieces; B1 and B4 also have closed forms.
    std::array<cplx, 5> B{};
    cplx B1_closed, B4_closed;
    double re_g21 = 0.0;
};

/// Requires c < max p2 so that lambda(1 - beta lambda)/(1 + lambda) = c has two roots.
AsymptoticLimits limits_infinity(double beta, double c, Branch branch);

}  // namespace nlhopf
