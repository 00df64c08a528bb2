#include "nonlocal_hopf/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "nonlocal_hopf/errors.hpp"

namespace nlhopf {

namespace {

constexpr double kPositivityFloor = 1e-8;
constexpr double kSteadyRange = 1e-8;
constexpr int kPeaksRequired = 6;
constexpr double kPeriodTol = 0.01;
constexpr double kAmplitudeTol = 0.02;

bool uniform(std::span<const double> a) {
    for (double x : a)
        if (x != a[0]) return false;
    return true;
}

// Crude Lipschitz proxy of the kinetics at O(1) densities.
double reaction_rate_bound(const ModelParams& p) { return 1.0 + p.b + 2.0 * p.c; }

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::imex ? "imex" : "explicit"; }
std::string to_string(Kinetics k) { return k == Kinetics::nonlocal ? "nonlocal" : "local"; }

std::string to_string(Convergence c) {
    switch (c) {
        case Convergence::steady: return "steady";
        case Convergence::periodic: return "periodic";
        case Convergence::undetermined: return "undetermined";
    }
    return "undetermined";
}

SimConfig default_sim_config(double ell) {
    SimConfig cfg;
    cfg.n_cells = std::max(32, static_cast<int>(std::lround(25.6 * ell)));
    return cfg;
}

double max_stable_dt(const SimConfig& config, const ModelParams& params) {
    const double dx = params.ell * std::numbers::pi / config.n_cells;
    const double lr = reaction_rate_bound(params);
    if (config.scheme == Scheme::imex) return 1.0 / lr;
    const double dmax = std::max(params.d1, params.d2);
    return 1.0 / (2.0 * dmax / (dx * dx) + lr);
}

void SimConfig::validate(const ModelParams& params) const {
    params.validate();
    if (n_cells < 32) throw DomainError("n_cells must be at least 32");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
    if (!(transient_fraction > 0.0 && transient_fraction < 1.0)) {
        throw DomainError("transient_fraction must lie in (0, 1)");
    }
    if (probe_index < 0 || probe_index >= n_cells) throw DomainError("probe_index outside the grid");
    const double bound = max_stable_dt(*this, params);
    if (dt > bound) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "dt = %.6g exceeds the %s stability bound %.6g", dt,
                      to_string(scheme).c_str(), bound);
        throw DomainError(buf);
    }
}

InitialCondition InitialCondition::constant(std::optional<double> level) {
    InitialCondition ic;
    ic.kind = Kind::constant;
    ic.level = level;
    return ic;
}

InitialCondition InitialCondition::fig1() {
    InitialCondition ic;
    ic.kind = Kind::fig1;
    return ic;
}

InitialCondition InitialCondition::fig2() {
    InitialCondition ic;
    ic.kind = Kind::fig2;
    return ic;
}

InitialCondition InitialCondition::custom(std::function<double(double)> u, std::function<double(double)> v) {
    InitialCondition ic;
    ic.kind = Kind::custom;
    ic.u_of_x = std::move(u);
    ic.v_of_x = std::move(v);
    return ic;
}

std::vector<double> cell_centers(int n_cells, double ell) {
    const double dx = ell * std::numbers::pi / n_cells;
    std::vector<double> x(static_cast<std::size_t>(n_cells));
    for (int j = 0; j < n_cells; ++j) x[static_cast<std::size_t>(j)] = (j + 0.5) * dx;
    return x;
}

SimState init_state(const SimConfig& config, const ModelParams& params, const InitialCondition& ic) {
    params.validate();
    if (config.n_cells < 1) throw DomainError("n_cells must be positive");
    const auto x = cell_centers(config.n_cells, params.ell);
    const double L = params.ell * std::numbers::pi;
    if (!(ic.noise >= 0.0 && ic.noise < 1.0)) throw DomainError("noise must lie in [0, 1)");
    std::mt19937_64 rng(ic.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    SimState s;
    s.u.resize(x.size());
    s.v.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double xj = x[j];
        switch (ic.kind) {
            case InitialCondition::Kind::constant: {
                const double lvl = ic.level ? *ic.level : equilibrium_from_b(params).lambda;
                s.u[j] = s.v[j] = lvl;
                break;
            }
            case InitialCondition::Kind::fig1: {
                const double cx = std::cos(xj);
                s.u[j] = 0.5 + 0.05 * xj * xj / (L * L);
                s.v[j] = 0.5 + 0.05 * cx * cx;
                break;
            }
            case InitialCondition::Kind::fig2: {
                const double cx = std::cos(xj);
                s.u[j] = 3.0 + 0.5 * xj * xj / (L * L);
                s.v[j] = 3.0 + 0.5 * cx * cx;
                break;
            }
            case InitialCondition::Kind::custom:
                if (!ic.u_of_x || !ic.v_of_x) throw DomainError("custom initial condition needs u and v");
                s.u[j] = ic.u_of_x(xj);
                s.v[j] = ic.v_of_x(xj);
                break;
        }
        if (ic.noise > 0.0) {
            s.u[j] *= 1.0 + ic.noise * unit(rng);
            s.v[j] *= 1.0 + ic.noise * unit(rng);
        }
        if (!(s.u[j] > 0.0) || !(s.v[j] > 0.0) || !std::isfinite(s.u[j]) || !std::isfinite(s.v[j])) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "initial data must be positive (x = %.6g)", xj);
            throw DomainError(buf);
        }
    }
    return s;
}

double nonlocal_mean(std::span<const double> u) {
    if (u.empty()) return 0.0;
    // Offsetting by u[0] makes constant fields come out exact.
    const double base = u[0];
    double acc = 0.0;
    for (double x : u) acc += x - base;
    return base + acc / static_cast<double>(u.size());
}

void neumann_laplacian(std::span<const double> u, double dx, std::span<double> out) {
    const std::size_t n = u.size();
    const double inv = 1.0 / (dx * dx);
    if (n == 1) {
        out[0] = 0.0;
        return;
    }
    out[0] = (u[1] - u[0]) * inv;
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = ((u[j + 1] - u[j]) - (u[j] - u[j - 1])) * inv;
    out[n - 1] = (u[n - 2] - u[n - 1]) * inv;
}

double mode_amplitude(std::span<const double> u, int n, double ell) {
    if (n < 0) throw DomainError("mode index must be nonnegative");
    if (n == 0) return nonlocal_mean(u);
    const double dx = ell * std::numbers::pi / static_cast<double>(u.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        acc += u[j] * std::cos(n * (static_cast<double>(j) + 0.5) * dx / ell);
    }
    return 2.0 * acc / static_cast<double>(u.size());
}

Stepper::Stepper(const SimConfig& config, const ModelParams& params) : cfg_(config), p_(params) {
    cfg_.validate(p_);
    dx_ = p_.ell * std::numbers::pi / cfg_.n_cells;
    const double gamma = 1.0 - 1.0 / std::numbers::sqrt2;
    if (cfg_.scheme == Scheme::imex) {
        tu_ = factor(p_.d1 * gamma * cfg_.dt);
        tv_ = factor(p_.d2 * gamma * cfg_.dt);
    }
    const auto n = static_cast<std::size_t>(cfg_.n_cells);
    for (auto* w : {&fu1_, &fv1_, &fu2_, &fv2_, &ku_, &kv_, &gu_, &gv_, &lu_, &lv_}) w->assign(n, 0.0);
}

// Thomas factorization of I - r * Laplacian with reflecting ends.
Stepper::Tridiag Stepper::factor(double r_dt) const {
    const std::size_t n = static_cast<std::size_t>(cfg_.n_cells);
    const double r = r_dt / (dx_ * dx_);
    Tridiag f;
    f.r = r;
    f.c_prime.assign(n, 0.0);
    f.inv_denom.assign(n, 0.0);
    double prev_c = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lower = j == 0 ? 0.0 : -r;
        const double upper = j + 1 == n ? 0.0 : -r;
        const double diag = 1.0 + (j == 0 || j + 1 == n ? r : 2.0 * r);
        const double denom = diag - lower * prev_c;
        f.inv_denom[j] = 1.0 / denom;
        f.c_prime[j] = upper / denom;
        prev_c = f.c_prime[j];
    }
    return f;
}

void Stepper::solve(const Tridiag& f, std::span<double> rhs) const {
    // A spatially uniform right-hand side is its own solution.
    if (uniform(rhs)) return;
    const std::size_t n = rhs.size();
    rhs[0] *= f.inv_denom[0];
    for (std::size_t j = 1; j < n; ++j) rhs[j] = (rhs[j] + f.r * rhs[j - 1]) * f.inv_denom[j];
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= f.c_prime[j] * rhs[j + 1];
}

void Stepper::reaction(std::span<const double> u, std::span<const double> v, std::span<double> fu,
                       std::span<double> fv) const {
    const bool nonlocal = cfg_.model == Kinetics::nonlocal;
    const double m = nonlocal ? nonlocal_mean(u) : 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double uj = u[j], vj = v[j];
        const double comp = nonlocal ? m : uj;
        fu[j] = uj * (1.0 - p_.beta * comp) - p_.b * uj * vj / (uj + 1.0);
        fv[j] = p_.c * vj * (1.0 - vj / uj);
    }
}

void Stepper::check(const SimState& s) const {
    double umin = s.u[0], vmin = s.v[0];
    bool finite = true;
    for (std::size_t j = 0; j < s.u.size(); ++j) {
        umin = std::min(umin, s.u[j]);
        vmin = std::min(vmin, s.v[j]);
        finite = finite && std::isfinite(s.u[j]) && std::isfinite(s.v[j]);
    }
    if (!finite || !(umin >= kPositivityFloor) || !(vmin >= kPositivityFloor)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "blow-up at t = %.6g: min u = %.3g, min v = %.3g", s.t, umin, vmin);
        throw BlowUpError(buf, s.t);
    }
}

void Stepper::step(SimState& s) {
    const std::size_t n = s.u.size();
    if (n != static_cast<std::size_t>(cfg_.n_cells) || s.v.size() != n) {
        throw DomainError("state size does not match n_cells");
    }
    const double dt = cfg_.dt;
    if (cfg_.scheme == Scheme::explicit_euler) {
        reaction(s.u, s.v, fu1_, fv1_);
        neumann_laplacian(s.u, dx_, lu_);
        neumann_laplacian(s.v, dx_, lv_);
        for (std::size_t j = 0; j < n; ++j) {
            s.u[j] += dt * (p_.d1 * lu_[j] + fu1_[j]);
            s.v[j] += dt * (p_.d2 * lv_[j] + fv1_[j]);
        }
        s.t += dt;
        check(s);
        return;
    }

    // ARS(2,2,2): L-stable implicit part, second order overall.
    const double gamma = 1.0 - 1.0 / std::numbers::sqrt2;
    const double delta = 1.0 - 1.0 / (2.0 * gamma);
    reaction(s.u, s.v, fu1_, fv1_);
    for (std::size_t j = 0; j < n; ++j) {
        ku_[j] = s.u[j] + gamma * dt * fu1_[j];
        kv_[j] = s.v[j] + gamma * dt * fv1_[j];
    }
    solve(tu_, ku_);
    solve(tv_, kv_);
    for (std::size_t j = 0; j < n; ++j) {
        gu_[j] = (ku_[j] - s.u[j] - gamma * dt * fu1_[j]) / (gamma * dt);
        gv_[j] = (kv_[j] - s.v[j] - gamma * dt * fv1_[j]) / (gamma * dt);
    }
    if (!(*std::min_element(ku_.begin(), ku_.end()) > 0.0)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "blow-up inside step at t = %.6g", s.t);
        throw BlowUpError(buf, s.t);
    }
    reaction(ku_, kv_, fu2_, fv2_);
    for (std::size_t j = 0; j < n; ++j) {
        s.u[j] += dt * (delta * fu1_[j] + (1.0 - delta) * fu2_[j]) + dt * (1.0 - gamma) * gu_[j];
        s.v[j] += dt * (delta * fv1_[j] + (1.0 - delta) * fv2_[j]) + dt * (1.0 - gamma) * gv_[j];
    }
    solve(tu_, s.u);
    solve(tv_, s.v);
    s.t += dt;
    check(s);
}

SimState step(const SimState& state, const SimConfig& config, const ModelParams& params) {
    Stepper st(config, params);
    SimState next = state;
    st.step(next);
    return next;
}

PeakAnalysis classify_probe(const ProbeSeries& series) {
    PeakAnalysis out;
    const auto& y = series.values;
    if (y.size() < 3) return out;
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    out.amplitude = 0.5 * (*mx - *mn);
    if (*mx - *mn < kSteadyRange) {
        out.verdict = Convergence::steady;
        return out;
    }

    // Strict three-point maxima, refined with the interpolating parabola.
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            idx.push_back(i);
            const double den = y[i - 1] - 2.0 * y[i] + y[i + 1];
            const double shift = den != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / den : 0.0;
            out.peak_times.push_back(series.t0 + (static_cast<double>(i) + shift) * series.dt);
        }
    }
    if (static_cast<int>(idx.size()) < kPeaksRequired) return out;

    const std::size_t first = idx.size() - kPeaksRequired;
    std::vector<double> intervals, swings;
    for (std::size_t k = first; k + 1 < idx.size(); ++k) {
        intervals.push_back(out.peak_times[k + 1] - out.peak_times[k]);
        const double trough = *std::min_element(y.begin() + static_cast<std::ptrdiff_t>(idx[k]),
                                                y.begin() + static_cast<std::ptrdiff_t>(idx[k + 1]));
        swings.push_back(y[idx[k]] - trough);
    }
    auto spread_ok = [](const std::vector<double>& a, double tol) {
        double mean = 0.0;
        for (double x : a) mean += x;
        mean /= static_cast<double>(a.size());
        if (!(mean > 0.0)) return false;
        for (double x : a)
            if (std::abs(x - mean) > tol * mean) return false;
        return true;
    };
    if (spread_ok(intervals, kPeriodTol) && spread_ok(swings, kAmplitudeTol)) {
        double mean = 0.0;
        for (double x : intervals) mean += x;
        out.period = mean / static_cast<double>(intervals.size());
        out.verdict = Convergence::periodic;
    }
    return out;
}

RunResult run(const ModelParams& params, const SimConfig& config, const InitialCondition& ic,
              const Observer& observer) {
    config.validate(params);
    Stepper stepper(config, params);
    SimState s = init_state(config, params, ic);

    const auto n_steps = static_cast<long long>(std::llround(config.t_end / config.dt));
    const auto tail_start = static_cast<long long>(std::floor(config.transient_fraction * n_steps));
    const long long sample_every =
        config.sample_interval > 0.0 ? std::max(1LL, std::llround(config.sample_interval / config.dt)) : 0;

    const auto xs = cell_centers(config.n_cells, params.ell);
    std::array<std::vector<double>, 5> cosines;
    for (int n = 0; n < 5; ++n) {
        cosines[static_cast<std::size_t>(n)].resize(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) {
            cosines[static_cast<std::size_t>(n)][j] = std::cos(n * xs[j] / params.ell);
        }
    }
    auto modes_of = [&](const std::vector<double>& u) {
        std::array<double, 5> c{};
        for (std::size_t n = 0; n < 5; ++n) {
            if (n == 0) {
                c[0] = nonlocal_mean(u);
                continue;
            }
            double acc = 0.0;
            for (std::size_t j = 0; j < u.size(); ++j) acc += u[j] * cosines[n][j];
            c[n] = 2.0 * acc / static_cast<double>(u.size());
        }
        return c;
    };

    ProbeSeries probe;
    probe.dt = config.dt;
    std::vector<std::array<double, 5>> modes;
    const auto pi = static_cast<std::size_t>(config.probe_index);

    if (observer && sample_every) observer(s);
    for (long long k = 1; k <= n_steps; ++k) {
        stepper.step(s);
        s.t = static_cast<double>(k) * config.dt;  // avoid drift from repeated addition
        if (k >= tail_start) {
            if (probe.values.empty()) probe.t0 = s.t;
            probe.values.push_back(s.u[pi]);
            modes.push_back(modes_of(s.u));
        }
        if (observer && sample_every && k % sample_every == 0) observer(s);
    }

    RunResult res;
    OrbitDiagnostics& d = res.diagnostics;
    const PeakAnalysis pa = classify_probe(probe);
    d.converged_to = pa.verdict;
    d.period = pa.period;
    d.amplitude_u = pa.amplitude;
    d.peak_count = static_cast<int>(pa.peak_times.size());

    // Average |c_n| over the last full period, or the whole tail otherwise.
    std::size_t from = 0;
    if (pa.period && !modes.empty()) {
        const double t_last = pa.peak_times.back();
        const double t_from = t_last - *pa.period;
        from = static_cast<std::size_t>(std::max(0.0, std::floor((t_from - probe.t0) / config.dt)));
        const std::size_t to = static_cast<std::size_t>(std::ceil((t_last - probe.t0) / config.dt));
        std::array<double, 5> acc{};
        std::size_t cnt = 0;
        for (std::size_t i = from; i < std::min(to, modes.size()); ++i, ++cnt)
            for (std::size_t n = 0; n < 5; ++n) acc[n] += std::abs(modes[i][n]);
        for (std::size_t n = 0; n < 5; ++n) d.mode_amp[n] = cnt ? acc[n] / static_cast<double>(cnt) : 0.0;
    } else if (!modes.empty()) {
        std::array<double, 5> acc{};
        for (const auto& m : modes)
            for (std::size_t n = 0; n < 5; ++n) acc[n] += std::abs(m[n]);
        for (std::size_t n = 0; n < 5; ++n) d.mode_amp[n] = acc[n] / static_cast<double>(modes.size());
    }

    d.lambda = equilibrium_from_b(params).lambda;
    double dev = 0.0;
    for (std::size_t j = 0; j < s.u.size(); ++j) {
        dev = std::max({dev, std::abs(s.u[j] - d.lambda), std::abs(s.v[j] - d.lambda)});
    }
    d.final_deviation = dev;
    const auto [umin, umax] = std::minmax_element(s.u.begin(), s.u.end());
    d.final_spatial_variation = *umax - *umin;
    res.final_state = std::move(s);
    return res;
}

}  // namespace nlhopf
