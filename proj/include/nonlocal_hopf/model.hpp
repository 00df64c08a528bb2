#pragma once

namespace nlhopf {

/// Dimensional rates of the nonlocal Holling-Tanner system.
struct RawParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double e = 1.0;
    double k = 1.0;
    double m = 1.0;
    double d1 = 1.0;
    double d2 = 1.0;
    double domain_length = 1.0;  // passed through as ell

    void validate() const;
};

/// Nondimensional parameters.  The domain is (0, ell*pi).
struct ModelParams {
    double d1 = 1.0;
    double d2 = 1.0;
    double beta = 1.0;
    double b = 1.0;
    double c = 1.0;
    double ell = 1.0;

    void validate() const;
    double lambda_max() const { return 1.0 / beta; }
};

/// The constant coexistence state (lambda, lambda).
struct Equilibrium {
    double lambda = 0.0;
};

ModelParams nondimensionalize(const RawParams& raw);

/// Positive root of beta*l^2 + (beta - 1 + b)*l - 1 = 0.
Equilibrium equilibrium_from_b(const ModelParams& params);

/// Inverse map (1 - beta*l)(1 + l)/l.  Strictly decreasing on (0, 1/beta).
double b_from_lambda(double beta, double lambda);

/// Throws DomainError unless 0 < lambda < 1/beta.
void require_lambda_in_range(double lambda, double beta);

}  // namespace nlhopf
