#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "nonlocal_hopf/model.hpp"

namespace nlhopf {

/// Trace and determinant of the linearization restricted to cos(n x / ell).
struct ModeQuadratic {
    int n = 0;
    double trace = 0.0;
    double det = 0.0;
};

enum class FailureReason { trace_nonnegative, det_nonpositive };

struct FailingMode {
    int n = 0;
    FailureReason reason = FailureReason::trace_nonnegative;
};

struct StabilityVerdict {
    bool stable = true;
    std::vector<FailingMode> failing_modes;
    int n_checked = 0;  // modes 0..n_checked were evaluated
};

struct CriticalPoints {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::optional<double> lambda3;  // only for beta <= 1
};

/// Which auxiliary curve: p1 (determinant condition), p2 (mode-1 trace
/// without diffusion), p3 (mode-0 trace without -c).
enum class PCurve { p1 = 1, p2 = 2, p3 = 3 };

double trace_T(int n, double lambda, const ModelParams& params);
double det_D(int n, double lambda, const ModelParams& params);
ModeQuadratic mode_quadratic(int n, double lambda, const ModelParams& params);

/// D(lambda, p), the mode-n determinant as a quadratic in p = n^2/ell^2.
double D_of_p(double lambda, double p, const ModelParams& params);

/// Evaluates p1, p2 or p3 on the closed interval [0, 1/beta].
double p_curve(PCurve which, double lambda, double beta, double c);
/// Analytic lambda-derivative of p_curve.
double p_curve_derivative(PCurve which, double lambda, double beta, double c);

CriticalPoints critical_points(double beta);

/// Roots of mu^2 - T mu + D = 0.
std::array<std::complex<double>, 2> quadratic_roots(double trace, double det);
std::array<std::complex<double>, 2> mode_eigenvalues(int n, double lambda, const ModelParams& params);

/// Largest mode index that has to be inspected: beyond it, the trace is
/// negative and the determinant positive for every lambda in (0, 1/beta).
int mode_cutoff(const ModelParams& params);

StabilityVerdict classify_equilibrium(double lambda, const ModelParams& params);

}  // namespace nlhopf
