#include "nonlocal_hopf/linear_stability.hpp"

#include <cmath>
#include <string>

#include "nonlocal_hopf/bisection.hpp"
#include "nonlocal_hopf/errors.hpp"

namespace nlhopf {

namespace {

// Safety inset for bracket endpoints at 0 and 1/beta.
constexpr double kInset = 1e-9;

double p2_of(double lambda, double beta) { return lambda * (1.0 - beta * lambda) / (1.0 + lambda); }

}  // namespace

double trace_T(int n, double lambda, const ModelParams& params) {
    require_lambda_in_range(lambda, params.beta);
    if (n < 0) throw DomainError("mode index must be nonnegative");
    const double beta = params.beta;
    if (n == 0) {
        return -params.c + lambda * (1.0 - beta - 2.0 * beta * lambda) / (1.0 + lambda);
    }
    const double k2 = static_cast<double>(n) * n / (params.ell * params.ell);
    return -params.c + p2_of(lambda, beta) - (params.d1 + params.d2) * k2;
}

double D_of_p(double lambda, double p, const ModelParams& params) {
    require_lambda_in_range(lambda, params.beta);
    if (!(p >= 0.0)) throw DomainError("p must be nonnegative");
    const double beta = params.beta;
    const double c = params.c;
    return c * (1.0 - beta * lambda) / (1.0 + lambda) + (params.d1 * c - params.d2 * p2_of(lambda, beta)) * p +
           params.d1 * params.d2 * p * p;
}

double det_D(int n, double lambda, const ModelParams& params) {
    require_lambda_in_range(lambda, params.beta);
    if (n < 0) throw DomainError("mode index must be nonnegative");
    if (n == 0) {
        return params.beta * params.c * lambda + params.c * (1.0 - params.beta * lambda) / (1.0 + lambda);
    }
    return D_of_p(lambda, static_cast<double>(n) * n / (params.ell * params.ell), params);
}

ModeQuadratic mode_quadratic(int n, double lambda, const ModelParams& params) {
    return ModeQuadratic{n, trace_T(n, lambda, params), det_D(n, lambda, params)};
}

double p_curve(PCurve which, double lambda, double beta, double c) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(lambda >= 0.0 && lambda <= 1.0 / beta)) {
        throw DomainError("p-curve argument " + std::to_string(lambda) + " outside [0, 1/beta]");
    }
    switch (which) {
        case PCurve::p1: {
            if (!(c > 0.0)) throw DomainError("c must be positive");
            const double s = 1.0 - 1.0 / std::sqrt(lambda + 1.0);
            return (1.0 - beta * lambda) / c * s * s;
        }
        case PCurve::p2:
            return p2_of(lambda, beta);
        case PCurve::p3:
            return lambda * (1.0 - beta - 2.0 * beta * lambda) / (1.0 + lambda);
    }
    throw DomainError("unknown p-curve");
}

double p_curve_derivative(PCurve which, double lambda, double beta, double c) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(lambda >= 0.0 && lambda <= 1.0 / beta)) {
        throw DomainError("p-curve argument " + std::to_string(lambda) + " outside [0, 1/beta]");
    }
    const double q = (1.0 + lambda) * (1.0 + lambda);
    switch (which) {
        case PCurve::p1: {
            if (!(c > 0.0)) throw DomainError("c must be positive");
            const double s = 1.0 - 1.0 / std::sqrt(lambda + 1.0);
            return s / c * (-beta * s + (1.0 - beta * lambda) * std::pow(lambda + 1.0, -1.5));
        }
        case PCurve::p2:
            return (1.0 - 2.0 * beta * lambda - beta * lambda * lambda) / q;
        case PCurve::p3:
            return (1.0 - beta - 4.0 * beta * lambda - 2.0 * beta * lambda * lambda) / q;
    }
    throw DomainError("unknown p-curve");
}

CriticalPoints critical_points(double beta) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    CriticalPoints cp;
    cp.lambda2 = std::sqrt((beta + 1.0) / beta) - 1.0;
    if (beta <= 1.0) cp.lambda3 = std::sqrt((beta + 1.0) / (2.0 * beta)) - 1.0;
    // p1' vanishes where beta(1 - (l+1)^{-1/2}) = (1 - beta l)(l+1)^{-3/2}; c only scales p1.
    auto g = [beta](double l) {
        return beta * (1.0 - 1.0 / std::sqrt(l + 1.0)) - (1.0 - beta * l) * std::pow(l + 1.0, -1.5);
    };
    cp.lambda1 = bisect(g, kInset, 1.0 / beta - kInset, 1e-12);
    return cp;
}

std::array<std::complex<double>, 2> quadratic_roots(double trace, double det) {
    const double disc = trace * trace - 4.0 * det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        // Avoid cancellation: compute the larger-magnitude root first.
        const double big = trace >= 0.0 ? 0.5 * (trace + r) : 0.5 * (trace - r);
        const double small = big != 0.0 ? det / big : 0.0;
        return {std::complex<double>(std::max(big, small)), std::complex<double>(std::min(big, small))};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * trace, im), std::complex<double>(0.5 * trace, -im)};
}

std::array<std::complex<double>, 2> mode_eigenvalues(int n, double lambda, const ModelParams& params) {
    return quadratic_roots(trace_T(n, lambda, params), det_D(n, lambda, params));
}

int mode_cutoff(const ModelParams& params) {
    params.validate();
    const double beta = params.beta;
    const double p2max = p2_of(std::sqrt((beta + 1.0) / beta) - 1.0, beta);
    // T_n < 0 once (d1+d2) n^2/ell^2 > max p2; D_n > 0 once d1 n^2/ell^2 > max p2
    // (the remaining terms of D_n are then positive).
    const double k2_needed = std::max(p2max / (params.d1 + params.d2), p2max / params.d1);
    int n = static_cast<int>(std::floor(params.ell * std::sqrt(k2_needed)));
    while (static_cast<double>(n) * n / (params.ell * params.ell) <= k2_needed) ++n;
    return std::max(n, 1);
}

StabilityVerdict classify_equilibrium(double lambda, const ModelParams& params) {
    require_lambda_in_range(lambda, params.beta);
    StabilityVerdict verdict;
    verdict.n_checked = mode_cutoff(params);
    for (int n = 0; n <= verdict.n_checked; ++n) {
        if (trace_T(n, lambda, params) >= 0.0) {
            verdict.failing_modes.push_back({n, FailureReason::trace_nonnegative});
        }
        if (det_D(n, lambda, params) <= 0.0) {
            verdict.failing_modes.push_back({n, FailureReason::det_nonpositive});
        }
    }
    verdict.stable = verdict.failing_modes.empty();
    return verdict;
}

}  // namespace nlhopf
