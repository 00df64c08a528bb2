#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nonlocal_hopf/model.hpp"

namespace nlhopf {

enum class Scheme { imex, explicit_euler };
/// nonlocal: prey competition through the spatial mean.  local: pointwise u.
enum class Kinetics { nonlocal, local };

std::string to_string(Scheme s);
std::string to_string(Kinetics k);

struct SimConfig {
    int n_cells = 256;
    double dt = 0.01;
    double t_end = 3000.0;
    Scheme scheme = Scheme::imex;
    Kinetics model = Kinetics::nonlocal;
    double transient_fraction = 0.5;
    int probe_index = 0;
    /// Time between observer callbacks; <= 0 disables sampling.
    double sample_interval = 1.0;

    /// Throws DomainError on bad sizes or a time step outside the stability
    /// bound of the scheme.
    void validate(const ModelParams& params) const;
};

/// n_cells = 25.6 * ell (256 at ell = 10), at least 32.
SimConfig default_sim_config(double ell);

/// Largest admissible dt for `config.scheme` at the given grid.
double max_stable_dt(const SimConfig& config, const ModelParams& params);

struct InitialCondition {
    enum class Kind { constant, fig1, fig2, custom };
    Kind kind = Kind::constant;
    /// Level of the constant state; empty means the equilibrium lambda.
    std::optional<double> level;
    /// Custom profiles as functions of x in (0, ell*pi).
    std::function<double(double)> u_of_x;
    std::function<double(double)> v_of_x;
    /// Optional multiplicative noise u *= 1 + noise * U(-1, 1), drawn from a
    /// generator seeded with `seed`, cell by cell (u then v).
    double noise = 0.0;
    std::uint64_t seed = 0;

    static InitialCondition constant(std::optional<double> level = std::nullopt);
    static InitialCondition fig1();
    static InitialCondition fig2();
    static InitialCondition custom(std::function<double(double)> u, std::function<double(double)> v);
};

struct SimState {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> v;
};

/// Cell centers (j + 1/2) * dx of the uniform grid on (0, ell*pi).
std::vector<double> cell_centers(int n_cells, double ell);

SimState init_state(const SimConfig& config, const ModelParams& params, const InitialCondition& ic);

/// Midpoint-rule mean over the cell-centered grid; exact for constant fields.
double nonlocal_mean(std::span<const double> u);

/// Three-point Laplacian with reflecting ghost cells.
void neumann_laplacian(std::span<const double> u, double dx, std::span<double> out);

/// c_n = (2 - delta_n0)/(ell pi) * int u cos(n x/ell) dx, midpoint rule.
double mode_amplitude(std::span<const double> u, int n, double ell);

/// Advances the state by one step in place.  Throws BlowUpError if u or v
/// drops below 1e-8 or becomes non-finite.
class Stepper {
public:
    Stepper(const SimConfig& config, const ModelParams& params);
    void step(SimState& state);
    double dx() const { return dx_; }

private:
    struct Tridiag {
        std::vector<double> c_prime;
        std::vector<double> inv_denom;
        double r = 0.0;
    };
    Tridiag factor(double diffusion) const;
    void solve(const Tridiag& f, std::span<double> rhs) const;
    void reaction(std::span<const double> u, std::span<const double> v, std::span<double> fu,
                  std::span<double> fv) const;
    void check(const SimState& s) const;

    SimConfig cfg_;
    ModelParams p_;
    double dx_ = 0.0;
    Tridiag tu_, tv_;
    std::vector<double> fu1_, fv1_, fu2_, fv2_, ku_, kv_, gu_, gv_, lu_, lv_;
};

SimState step(const SimState& state, const SimConfig& config, const ModelParams& params);

enum class Convergence { steady, periodic, undetermined };
std::string to_string(Convergence c);

struct OrbitDiagnostics {
    Convergence converged_to = Convergence::undetermined;
    std::optional<double> period;
    double amplitude_u = 0.0;  // half the probe range over the retained tail
    std::array<double, 5> mode_amp{};
    int peak_count = 0;
    double lambda = 0.0;  // equilibrium of the run's b
    /// max |u - lambda|, |v - lambda| over the final state.
    double final_deviation = 0.0;
    /// max - min of u over the final state.
    double final_spatial_variation = 0.0;
};

struct RunResult {
    OrbitDiagnostics diagnostics;
    SimState final_state;
};

using Observer = std::function<void(const SimState&)>;

/// Integrates to t_end, calling `observer` at t = 0 and then every
/// sample_interval.  A blow-up propagates after the observer has seen every
/// sample before it.
RunResult run(const ModelParams& params, const SimConfig& config, const InitialCondition& ic,
              const Observer& observer = nullptr);

/// Tail classification from a uniformly sampled probe signal.
struct ProbeSeries {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;
};

struct PeakAnalysis {
    Convergence verdict = Convergence::undetermined;
    std::vector<double> peak_times;
    std::optional<double> period;
    double amplitude = 0.0;
};

PeakAnalysis classify_probe(const ProbeSeries& series);

}  // namespace nlhopf
