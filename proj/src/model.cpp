#include "nonlocal_hopf/model.hpp"

#include <cmath>
#include <string>

#include "nonlocal_hopf/errors.hpp"

namespace nlhopf {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string("parameter '") + name + "' must be positive and finite, got " +
                          std::to_string(value));
    }
}

}  // namespace

void RawParams::validate() const {
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(c, "c");
    require_positive(e, "e");
    require_positive(k, "k");
    require_positive(m, "m");
    require_positive(d1, "d1");
    require_positive(d2, "d2");
    require_positive(domain_length, "domain_length");
}

void ModelParams::validate() const {
    require_positive(d1, "d1");
    require_positive(d2, "d2");
    require_positive(beta, "beta");
    require_positive(b, "b");
    require_positive(c, "c");
    require_positive(ell, "ell");
}

ModelParams nondimensionalize(const RawParams& raw) {
    raw.validate();
    ModelParams p;
    p.beta = raw.m / raw.k;
    p.b = raw.b / (raw.a * raw.e);
    p.c = raw.c / raw.a;
    p.d1 = raw.d1 / raw.a;
    p.d2 = raw.d2 / raw.a;
    p.ell = raw.domain_length;
    return p;
}

Equilibrium equilibrium_from_b(const ModelParams& params) {
    params.validate();
    // Rationalized root 2/(B + sqrt(B^2 + 4 beta)) avoids cancellation when B > 0.
    const double B = params.beta - 1.0 + params.b;
    const double disc = std::sqrt(B * B + 4.0 * params.beta);
    const double lambda = B >= 0.0 ? 2.0 / (B + disc) : (disc - B) / (2.0 * params.beta);
    return Equilibrium{lambda};
}

void require_lambda_in_range(double lambda, double beta) {
    if (!(lambda > 0.0 && lambda < 1.0 / beta)) {
        throw DomainError("lambda = " + std::to_string(lambda) + " outside (0, 1/beta) = (0, " +
                          std::to_string(1.0 / beta) + ")");
    }
}

double b_from_lambda(double beta, double lambda) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    require_lambda_in_range(lambda, beta);
    return (1.0 - beta * lambda) * (1.0 + lambda) / lambda;
}

}  // namespace nlhopf
