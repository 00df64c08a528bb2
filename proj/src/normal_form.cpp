#include "nonlocal_hopf/normal_form.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "nonlocal_hopf/errors.hpp"
#include "nonlocal_hopf/linear_stability.hpp"

namespace nlhopf {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kResonanceTol = 1e-12;

struct ReducedA {
    cplx A1, A2, A3;
};

// g21 = A1 + A2 + A3 after integrating the cosine profiles exactly:
//   int cos^2 = ell pi/2, int cos^4 = 3 ell pi/8, int cos^2 cos(2x/ell) = ell pi/4.
// kappa = (1 - beta l)/(l (1 + l)) is the uv-coefficient magnitude of the prey kinetics.
ReducedA reduced_a_terms(double l, double beta, double c, cplx q2, cplx q2_star, cplx D,
                         const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
    const double k = 1.0 - beta * l;
    const double kappa = k / (l * (1.0 + l));
    const double r = 2.0 * l / (1.0 + l);
    const cplx q2b = std::conj(q2);
    const cplx qsb = std::conj(q2_star);

    ReducedA out;
    out.A1 = kappa / D * (r * b[0] - b[1] - q2 * b[0]) + 2.0 * kappa / D * (r * b[2] - b[3] - q2 * b[2]) -
             2.0 * beta * b[2] / D - 2.0 * c / (D * l) * qsb * (1.0 - q2) * (b[0] - b[1]) -
             4.0 * c / (D * l) * qsb * (1.0 - q2) * (b[2] - b[3]);

    const double l2 = l * l;
    const double lp = 1.0 + l;
    out.A2 = 3.0 / (4.0 * D) * (-6.0 * k / (lp * lp * lp) + 2.0 * k / (l * lp * lp) * (q2b + 2.0 * q2)) +
             3.0 / (4.0 * D) *
                 (-4.0 * c / l2 * qsb * (q2b + 2.0 * q2) + 6.0 * c / l2 * qsb +
                  2.0 * c / l2 * qsb * (q2 * q2 + 2.0 * q2 * q2b));

    out.A3 = kappa / (2.0 * D) * ((r - q2b) * a[0] - a[1]) + kappa / D * ((r - q2b) * a[2] - a[3]) -
             beta * a[2] / D - c / (D * l) * qsb * (1.0 - q2b) * (a[0] - a[1]) -
             2.0 * c / (D * l) * qsb * (1.0 - q2b) * (a[2] - a[3]);
    return out;
}

std::vector<double> midpoint_cosines(double ell, int nodes, double& dx) {
    const double length = ell * std::numbers::pi;
    dx = length / nodes;
    std::vector<double> cs(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) cs[static_cast<std::size_t>(j)] = std::cos((j + 0.5) * dx / ell);
    return cs;
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }
std::string to_string(OrbitStability s) { return s == OrbitStability::stable ? "stable" : "unstable"; }

KineticTaylor kinetic_taylor(double lambda, const ModelParams& params) {
    require_lambda_in_range(lambda, params.beta);
    const double k = 1.0 - params.beta * lambda;
    const double lp = 1.0 + lambda;
    const double c = params.c;
    KineticTaylor t;
    t.f_uu = k / (lp * lp);
    t.f_uv = -k / (lambda * lp);
    t.f_uuu = -k / (lp * lp * lp);
    t.f_uuv = k / (lambda * lp * lp);
    t.nonlocal = -params.beta;
    t.g_uu = -c / lambda;
    t.g_vv = -c / lambda;
    t.g_uv = 2.0 * c / lambda;
    t.g_uuu = c / (lambda * lambda);
    t.g_uuv = -2.0 * c / (lambda * lambda);
    t.g_uvv = c / (lambda * lambda);
    return t;
}

EigenData eigen_data(double lambda_star, const ModelParams& params) {
    params.validate();
    const double d1 = det_D(1, lambda_star, params);
    if (!(d1 > 0.0)) throw DegenerateError("invalid Hopf point: D_1(lambda*) <= 0");
    EigenData ed;
    ed.lambda_star = lambda_star;
    ed.omega_star = std::sqrt(d1);
    ed.ell = params.ell;
    const double P = 1.0 / (params.ell * params.ell);
    const double k = 1.0 - params.beta * lambda_star;
    const cplx s = I * ed.omega_star + params.d2 * P + params.c;
    ed.q2 = params.c / s;
    ed.q2_star = k / (I * ed.omega_star - params.d2 * P - params.c);
    ed.D = 1.0 - params.c * k / (s * s);
    return ed;
}

EigenData eigen_data(const HopfPoint& point, const ModelParams& params) {
    if (point.mode != 1) throw DomainError("normal-form data is only available at mode-1 Hopf points");
    return eigen_data(point.lambda, params);
}

NormalizationResiduals normalization_residuals(const EigenData& ed, const ModelParams& params, int nodes) {
    double dx = 0.0;
    const auto cs = midpoint_cosines(params.ell, nodes, dx);
    const cplx pref = 2.0 / (params.ell * std::numbers::pi * ed.D);  // conj of the q* prefactor
    const cplx qsb = std::conj(ed.q2_star);
    cplx s1 = 0.0, s2 = 0.0;
    for (double cval : cs) {
        const double w = cval * cval * dx;
        s1 += pref * (1.0 + qsb * ed.q2) * w;
        s2 += pref * (1.0 + qsb * std::conj(ed.q2)) * w;
    }
    return {s1 - 1.0, s2};
}

std::array<cplx, 4> gamma_coeffs(const EigenData& ed, const ModelParams& params) {
    const double l = ed.lambda_star;
    const double k = 1.0 - params.beta * l;
    const double c = params.c;
    const cplx q2 = ed.q2;
    const cplx q2b = std::conj(q2);
    std::array<cplx, 4> g;
    g[0] = 2.0 * k / ((1.0 + l) * (1.0 + l)) - 2.0 * k / (l * (1.0 + l)) * q2;
    g[1] = -2.0 * c / l * (1.0 - q2) * (1.0 - q2);
    g[2] = 2.0 * k / ((1.0 + l) * (1.0 + l)) - k / (l * (1.0 + l)) * (q2b + q2);
    g[3] = -2.0 * c / l * (1.0 - q2) * (1.0 - q2b);
    return g;
}

CenterManifoldCoeffs ab_coeffs(const EigenData& ed, const std::array<cplx, 4>& gamma, const ModelParams& params) {
    const double l = ed.lambda_star;
    const double w = ed.omega_star;
    const double c = params.c;
    const double k = 1.0 - params.beta * l;
    const double P4 = 4.0 / (params.ell * params.ell);
    const double p2 = p_curve(PCurve::p2, l, params.beta, c);
    const double p3 = p_curve(PCurve::p3, l, params.beta, c);
    const double T0 = trace_T(0, l, params), D0 = det_D(0, l, params);
    const double T2 = trace_T(2, l, params), D2 = det_D(2, l, params);
    const cplx den2 = -4.0 * w * w - 2.0 * I * T2 * w + D2;
    const cplx den0 = -4.0 * w * w - 2.0 * I * T0 * w + D0;
    if (std::abs(den2) < kResonanceTol || std::abs(den0) < kResonanceTol) {
        throw DegenerateError("2 i omega* resonates with the mode-0 or mode-2 spectrum");
    }
    if (std::abs(D2) < kResonanceTol || std::abs(D0) < kResonanceTol) {
        throw DegenerateError("zero eigenvalue in mode 0 or mode 2");
    }
    const cplx g1 = gamma[0], g2 = gamma[1], g3 = gamma[2], g4 = gamma[3];
    CenterManifoldCoeffs cm;
    cm.gamma = gamma;
    cm.a[0] = 0.5 * (g1 * (2.0 * I * w + c + params.d2 * P4) - g2 * k) / den2;
    cm.a[1] = 0.5 * (g2 * (2.0 * I * w + params.d1 * P4 - p2) + c * g1) / den2;
    cm.a[2] = 0.5 * (g1 * (2.0 * I * w + c) - g2 * k) / den0;
    cm.a[3] = 0.5 * (g2 * (2.0 * I * w - p3) + c * g1) / den0;
    cm.b[0] = 0.5 * (g3 * (params.d2 * P4 + c) - g4 * k) / D2;
    cm.b[1] = 0.5 * (g4 * (params.d1 * P4 - p2) + c * g3) / D2;
    cm.b[2] = 0.5 * (g3 * c - g4 * k) / D0;
    cm.b[3] = 0.5 * (g4 * (-p3) + c * g3) / D0;
    return cm;
}

std::array<cplx, 3> quadratic_coefficients(const EigenData& ed, const ModelParams& params, int nodes) {
    const KineticTaylor t = kinetic_taylor(ed.lambda_star, params);
    double dx = 0.0;
    const auto cs = midpoint_cosines(params.ell, nodes, dx);
    const double length = params.ell * std::numbers::pi;
    const cplx pref = 2.0 / (length * ed.D);
    const cplx qsb = std::conj(ed.q2_star);

    // Both arguments are multiples of cos(x/ell): U_i = (1, r_i) cos.
    auto project = [&](cplx r1, cplx r2) {
        double mean_cos = 0.0;
        for (double cv : cs) mean_cos += cv * dx;
        mean_cos /= length;
        cplx acc = 0.0;
        for (double cv : cs) {
            const cplx u1 = cv, v1 = r1 * cv, u2 = cv, v2 = r2 * cv;
            const cplx fu = t.f_uu * u1 * u2 + 0.5 * t.f_uv * (u1 * v2 + u2 * v1) +
                            0.5 * t.nonlocal * (u1 * mean_cos + u2 * mean_cos);
            const cplx fv = t.g_uu * u1 * u2 + t.g_vv * v1 * v2 + 0.5 * t.g_uv * (u1 * v2 + u2 * v1);
            acc += pref * cv * (fu + qsb * fv) * dx;
        }
        return 2.0 * acc;
    };
    const cplx q2 = ed.q2, q2b = std::conj(ed.q2);
    return {project(q2, q2), project(q2, q2b), project(q2b, q2b)};
}

G21Breakdown g21_finite(const HopfPoint& point, const ModelParams& params) {
    const EigenData ed = eigen_data(point, params);
    G21Breakdown out;
    out.coeffs = ab_coeffs(ed, gamma_coeffs(ed, params), params);
    const ReducedA r = reduced_a_terms(ed.lambda_star, params.beta, params.c, ed.q2, ed.q2_star, ed.D,
                                       out.coeffs.a, out.coeffs.b);
    out.A1 = r.A1;
    out.A2 = r.A2;
    out.A3 = r.A3;
    out.g21 = r.A1 + r.A2 + r.A3;
    const auto g = quadratic_coefficients(ed, params);
    out.g20 = g[0];
    out.g11 = g[1];
    out.g02 = g[2];
    return out;
}

HopfNormalForm normal_form(const HopfPoint& point, const ModelParams& params) {
    const double alpha = transversality(point, params);
    if (std::abs(alpha) < 1e-14) throw DegenerateError("zero transversality at Hopf point");
    const G21Breakdown g = g21_finite(point, params);
    HopfNormalForm nf;
    nf.lambda_star = point.lambda;
    nf.b_star = b_from_lambda(params.beta, point.lambda);
    nf.g21 = g.g21;
    nf.C1 = 0.5 * g.g21;
    nf.transversality = alpha;
    nf.mu2 = -nf.C1.real() / alpha;
    nf.beta2 = g.g21.real();
    nf.direction = nf.mu2 > 0.0 ? Direction::forward : Direction::backward;
    nf.direction_in_b = nf.direction == Direction::forward ? Direction::backward : Direction::forward;
    nf.orbit_stability = nf.beta2 < 0.0 ? OrbitStability::stable : OrbitStability::unstable;
    return nf;
}

AsymptoticLimits limits_infinity(double beta, double c, Branch branch) {
    if (!(beta > 0.0) || !(c > 0.0)) throw DomainError("beta and c must be positive");
    const double disc = (1.0 - c) * (1.0 - c) - 4.0 * beta * c;
    if (!(c < 1.0) || !(disc > 0.0)) {
        throw DomainError("c >= max p2: the limiting Hopf points do not exist");
    }
    AsymptoticLimits L;
    L.branch = branch;
    // Roots of beta l^2 - (1 - c) l + c = 0; the small one in rationalized form.
    const double sq = std::sqrt(disc);
    const double l = branch == Branch::plus ? ((1.0 - c) + sq) / (2.0 * beta) : 2.0 * c / ((1.0 - c) + sq);
    const double lp = 1.0 + l;
    const double l2 = l * l;
    const double w2 = c * (1.0 - beta * l) / lp;
    const double w = std::sqrt(w2);
    L.lambda_inf = l;
    L.omega_inf = w;
    L.b_inf = b_from_lambda(beta, l);

    L.q2 = l / lp - I * c / (w * lp);
    L.q2_star = -1.0 - I * w / c;
    L.D = 2.0 / lp * (1.0 + I * c / w);

    L.gamma[0] = I * 2.0 * w / (l * lp);
    L.gamma[1] = -2.0 * c / (l * lp * lp) * (1.0 - l + 2.0 * I * c / w);
    L.gamma[2] = 0.0;
    L.gamma[3] = -2.0 * c / (l * lp);

    const cplx den = -3.0 * w2 + beta * c * l + 2.0 * I * beta * l * w;
    L.a[0] = 1.0 / (3.0 * l) - c * I / (l * w * lp);
    L.a[1] = (l - 5.0) / (3.0 * lp * lp) - I * c * (5.0 * l - 1.0) / (3.0 * l * w * lp * lp);
    L.a[2] = -3.0 * w2 * L.a[0] / den;
    L.a[3] = (-3.0 * w2 * L.a[1] + beta * l * L.gamma[1] / 2.0) / den;
    L.b[0] = 1.0 / l;
    L.b[1] = 1.0 / lp;
    L.b[2] = c * c / (l2 * (w2 + beta * c * l));
    L.b[3] = c * (c - beta * l) / (l * lp * (w2 + beta * c * l));

    const ReducedA r = reduced_a_terms(l, beta, c, L.q2, L.q2_star, L.D, L.a, L.b);
    L.A1 = r.A1;
    L.A2 = r.A2;
    L.A3 = r.A3;

    L.re_A1 = 7.0 * c / (2.0 * l2 * lp) + c * (w2 - beta * c * l) / (l2 * lp * (w2 + beta * c * l));
    L.re_A2 = -3.0 * c / (4.0 * l * lp * lp) - 3.0 * c / (2.0 * l2 * lp);
    const double tail = beta * c * c / (2.0 * l2 * lp) * (beta * c * l * (l + 4.0) - w2 * (l - 2.0)) /
                        ((-3.0 * w2 + beta * c * l) * (-3.0 * w2 + beta * c * l) + 4.0 * beta * beta * l2 * w2);
    L.re_A3 = -9.0 * c / (4.0 * l2 * lp) + tail;

    const cplx q2b = std::conj(L.q2);
    const cplx qsb = std::conj(L.q2_star);
    const double rr = 2.0 * l / lp;
    L.B[0] = c / (L.D * l2) * ((rr - q2b) * L.a[0] / 2.0 - L.a[1] / 2.0);
    L.B[1] = 2.0 * c / (L.D * l2) * ((rr - q2b) * L.a[2] / 2.0 - L.a[3] / 2.0);
    L.B[2] = -beta * L.a[2] / L.D;
    L.B[3] = -c / (L.D * l) * qsb * (1.0 - q2b) * (L.a[0] - L.a[1]);
    L.B[4] = -2.0 * c / (L.D * l) * qsb * (1.0 - q2b) * (L.a[2] - L.a[3]);
    L.B1_closed = c / (12.0 * l2 * lp) - I * w / (6.0 * l2 * lp);
    L.B4_closed = -5.0 * c / (6.0 * l2 * lp) - I * w * (2.0 * l + 1.0) / (6.0 * l2 * lp);

    L.re_g21 = -3.0 * c / (4.0 * l * lp * lp) - c / (4.0 * l2 * lp) +
               c * (w2 - beta * c * l) / (l2 * lp * (w2 + beta * c * l)) + tail;
    return L;
}

}  // namespace nlhopf
