#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nonlocal_hopf/errors.hpp"
#include "nonlocal_hopf/hopf.hpp"
#include "nonlocal_hopf/pde_sim.hpp"
#include "test_support.hpp"

using namespace nlhopf;
using testsupport::strong_set;
using testsupport::weak_set;

namespace {

SimConfig quick(double t_end, int n = 128, double dt = 0.05) {
    SimConfig cfg;
    cfg.n_cells = n;
    cfg.dt = dt;
    cfg.t_end = t_end;
    return cfg;
}

// Classical RK4 on the spatially homogeneous kinetics.
std::array<double, 2> ode_rk4(const ModelParams& p, double u, double v, double t, int steps) {
    auto f = [&](double a, double b) {
        return std::array<double, 2>{a * (1 - p.beta * a) - p.b * a * b / (a + 1), p.c * b * (1 - b / a)};
    };
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) {
        const auto k1 = f(u, v);
        const auto k2 = f(u + h / 2 * k1[0], v + h / 2 * k1[1]);
        const auto k3 = f(u + h / 2 * k2[0], v + h / 2 * k2[1]);
        const auto k4 = f(u + h * k3[0], v + h * k3[1]);
        u += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        v += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    }
    return {u, v};
}

double spatial_variation(const std::vector<double>& w) {
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    return *hi - *lo;
}

}  // namespace

TEST_CASE("grid helpers") {
    const auto x = cell_centers(64, 10.0);
    REQUIRE(x.size() == 64);
    const double dx = 10.0 * std::numbers::pi / 64;
    CHECK(x.front() == doctest::Approx(dx / 2));
    CHECK(x.back() == doctest::Approx(10.0 * std::numbers::pi - dx / 2));

    std::vector<double> c(64, 0.37), out(64, 1.0);
    neumann_laplacian(c, dx, out);
    for (double o : out) CHECK(o == 0.0);
    CHECK(nonlocal_mean(c) == 0.37);

    std::vector<double> cos1(64), cos2(64);
    for (int j = 0; j < 64; ++j) {
        cos1[j] = std::cos(x[j] / 10.0);
        cos2[j] = cos1[j] * cos1[j];
    }
    CHECK(std::abs(nonlocal_mean(cos1)) <= 1e-14);
    CHECK(nonlocal_mean(cos2) == doctest::Approx(0.5).epsilon(1e-14));

    // Second-order consistency of the stencil away from the walls.
    neumann_laplacian(cos1, dx, out);
    for (int j = 1; j < 63; ++j) CHECK(out[j] == doctest::Approx(-cos1[j] / 100).epsilon(1e-3).scale(1e-3));

    std::vector<double> u(64);
    for (int j = 0; j < 64; ++j) u[j] = 0.4 + 0.01 * cos1[j];
    CHECK(mode_amplitude(u, 0, 10.0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(mode_amplitude(u, 1, 10.0) == doctest::Approx(0.01).epsilon(1e-12));
    for (int n = 2; n <= 4; ++n) CHECK(std::abs(mode_amplitude(u, n, 10.0)) <= 1e-15);
    CHECK(std::abs(mode_amplitude(c, 3, 10.0)) <= 1e-15);
}

TEST_CASE("initial conditions") {
    const ModelParams p = strong_set();
    const SimConfig cfg = quick(1.0, 64);
    const auto x = cell_centers(64, p.ell);
    const double L = p.ell * std::numbers::pi;
    const double lam = equilibrium_from_b(p).lambda;

    const SimState eq = init_state(cfg, p, InitialCondition::constant());
    for (int j = 0; j < 64; ++j) CHECK((eq.u[j] == lam && eq.v[j] == lam));

    const SimState f1 = init_state(cfg, p, InitialCondition::fig1());
    const SimState f2 = init_state(cfg, p, InitialCondition::fig2());
    for (int j = 0; j < 64; ++j) {
        const double cx = std::cos(x[j]);
        CHECK(f1.u[j] == doctest::Approx(0.5 + 0.05 * x[j] * x[j] / (L * L)));
        CHECK(f1.v[j] == doctest::Approx(0.5 + 0.05 * cx * cx));
        CHECK(f2.u[j] == doctest::Approx(3 + 0.5 * x[j] * x[j] / (L * L)));
        CHECK(f2.v[j] == doctest::Approx(3 + 0.5 * cx * cx));
    }

    CHECK_THROWS_AS(init_state(cfg, p, InitialCondition::constant(0.0)), DomainError);
    CHECK_THROWS_AS(init_state(cfg, p, InitialCondition::custom([](double x) { return x - 1.0; },
                                                                 [](double) { return 1.0; })),
                    DomainError);

    InitialCondition noisy = InitialCondition::constant(0.3);
    noisy.noise = 0.1;
    noisy.seed = 7;
    const SimState a = init_state(cfg, p, noisy), b = init_state(cfg, p, noisy);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
    CHECK(spatial_variation(a.u) > 0);
    for (int j = 0; j < 64; ++j) CHECK(std::abs(a.u[j] / 0.3 - 1) <= 0.1);
}

TEST_CASE("config validation") {
    const ModelParams p = strong_set();
    SimConfig cfg = quick(10.0);
    CHECK_NOTHROW(cfg.validate(p));
    SimConfig bad = cfg;
    bad.n_cells = 31;
    CHECK_THROWS_AS(bad.validate(p), DomainError);
    bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(p), DomainError);
    bad = cfg;
    bad.dt = 1.01 * max_stable_dt(cfg, p);
    CHECK_THROWS_AS(bad.validate(p), DomainError);
    bad = cfg;
    bad.scheme = Scheme::explicit_euler;
    CHECK_THROWS_AS(bad.validate(p), DomainError);  // diffusion limit is far below 0.05
    bad.dt = 0.9 * max_stable_dt(bad, p);
    CHECK_NOTHROW(bad.validate(p));
    bad = cfg;
    bad.transient_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(p), DomainError);
    bad = cfg;
    bad.probe_index = 128;
    CHECK_THROWS_AS(bad.validate(p), DomainError);
    CHECK(default_sim_config(10.0).n_cells == 256);
    CHECK(default_sim_config(20.0).n_cells == 512);
    CHECK(default_sim_config(0.5).n_cells == 32);
}

TEST_CASE("equilibrium is a fixed point of the discrete map") {
    for (Kinetics k : {Kinetics::nonlocal, Kinetics::local})
        for (Scheme s : {Scheme::imex, Scheme::explicit_euler}) {
            const ModelParams p = weak_set(10.0, 0.7);
            SimConfig cfg = quick(1.0, 64);
            cfg.model = k;
            cfg.scheme = s;
            cfg.dt = 0.5 * max_stable_dt(cfg, p);
            const double lam = equilibrium_from_b(p).lambda;
            SimState st = init_state(cfg, p, InitialCondition::constant());
            for (int i = 0; i < 5; ++i) st = step(st, cfg, p);
            for (int j = 0; j < 64; ++j) {
                CHECK(std::abs(st.u[j] - lam) <= 1e-12);
                CHECK(std::abs(st.v[j] - lam) <= 1e-12);
            }
        }
}

TEST_CASE("homogeneous data follow the kinetic ODE") {
    const ModelParams p = strong_set(10.0, 1.2);
    for (Kinetics k : {Kinetics::nonlocal, Kinetics::local}) {
        SimConfig cfg = quick(50.0, 64, 0.005);
        cfg.model = k;
        double worst = 0.0;
        const RunResult r = run(p, cfg, InitialCondition::constant(0.5), [&](const SimState& s) {
            worst = std::max({worst, spatial_variation(s.u), spatial_variation(s.v)});
        });
        CHECK(worst <= 1e-10);
        CHECK(r.diagnostics.final_spatial_variation <= 1e-10);
        // Start from u = v = 0.5.
        const auto ref = ode_rk4(p, 0.5, 0.5, r.final_state.t, 20000);
        CHECK(r.final_state.u[0] == doctest::Approx(ref[0]).epsilon(1e-5));
        CHECK(r.final_state.v[0] == doctest::Approx(ref[1]).epsilon(1e-5));
    }
}

TEST_CASE("IMEX and explicit Euler agree on a short run") {
    const ModelParams p = strong_set(10.0, 1.2);
    SimConfig a = quick(5.0, 64, 0.001);
    SimConfig b = a;
    b.scheme = Scheme::explicit_euler;
    b.dt = 0.5 * max_stable_dt(b, p);
    const RunResult ra = run(p, a, InitialCondition::fig1());
    const RunResult rb = run(p, b, InitialCondition::fig1());
    for (int j = 0; j < 64; ++j) CHECK(ra.final_state.u[j] == doctest::Approx(rb.final_state.u[j]).epsilon(1e-3));
}

TEST_CASE("blow-up guard") {
    // Predator far above prey: the v^2/u term drives u through zero.
    ModelParams p = strong_set(10.0, 10.0);
    SimConfig cfg = quick(1.0, 32);
    cfg.dt = 0.9 * max_stable_dt(cfg, p);
    REQUIRE_NOTHROW(cfg.validate(p));
    const auto ic = InitialCondition::custom([](double) { return 0.5; }, [](double) { return 50.0; });
    CHECK_THROWS_AS(run(p, cfg, ic), BlowUpError);
}

TEST_CASE("probe classification") {
    ProbeSeries flat{0.0, 0.5, std::vector<double>(400, 0.3)};
    CHECK(classify_probe(flat).verdict == Convergence::steady);

    ProbeSeries sine{100.0, 0.5, {}};
    for (int i = 0; i < 800; ++i) sine.values.push_back(0.4 + 0.1 * std::sin(2 * std::numbers::pi * i * 0.5 / 37.0));
    const PeakAnalysis ps = classify_probe(sine);
    CHECK(ps.verdict == Convergence::periodic);
    REQUIRE(ps.period);
    CHECK(*ps.period == doctest::Approx(37.0).epsilon(1e-3));
    CHECK(ps.amplitude == doctest::Approx(0.1).epsilon(1e-3));

    ProbeSeries damped = sine;
    for (int i = 0; i < 800; ++i) damped.values[i] = 0.4 + 0.1 * std::exp(-0.01 * i) * std::sin(i * 0.5 / 6.0);
    CHECK(classify_probe(damped).verdict == Convergence::undetermined);

    ProbeSeries few = sine;
    few.values.resize(150);  // about 2 periods
    CHECK(classify_probe(few).verdict == Convergence::undetermined);
}

TEST_CASE("stable equilibrium attracts a mode-1 perturbation") {
    const ModelParams p = strong_set(10.0, 0.9);
    const auto st = classify_equilibrium(equilibrium_from_b(p).lambda, p);
    REQUIRE(st.stable);
    const double lam = equilibrium_from_b(p).lambda;
    const auto ic = InitialCondition::custom([&](double x) { return lam + 1e-3 * std::cos(x / p.ell); },
                                             [&](double) { return lam; });
    const RunResult r = run(p, quick(2400.0), ic);
    CHECK(r.diagnostics.converged_to == Convergence::steady);
    CHECK(r.diagnostics.final_deviation <= 1e-6);
    CHECK(r.diagnostics.lambda == lam);
}

TEST_CASE("weak-competition set from the fig2 profile is periodic") {
    const ModelParams p = weak_set(10.0, 0.5);
    double umin = INFINITY, vmin = INFINITY;
    const RunResult r = run(p, quick(3000.0), InitialCondition::fig2(), [&](const SimState& s) {
        umin = std::min(umin, *std::min_element(s.u.begin(), s.u.end()));
        vmin = std::min(vmin, *std::min_element(s.v.begin(), s.v.end()));
    });
    CHECK(r.diagnostics.converged_to == Convergence::periodic);
    REQUIRE(r.diagnostics.period);
    CHECK(*r.diagnostics.period > 0);
    CHECK(r.diagnostics.peak_count >= 6);
    CHECK(umin > 0);
    CHECK(vmin > 0);
}

TEST_CASE("strong-competition orbit at ell = 20 is mode-1 dominated and grid converged") {
    SimConfig coarse = quick(3000.0, 256, 0.02);
    SimConfig fine = quick(3000.0, 512, 0.01);
    const ModelParams p = strong_set(20.0, 1.2);
    const RunResult rc = run(p, coarse, InitialCondition::fig1());
    const RunResult rf = run(p, fine, InitialCondition::fig1());
    for (const RunResult* r : {&rc, &rf}) {
        CHECK(r->diagnostics.converged_to == Convergence::periodic);
        const auto& m = r->diagnostics.mode_amp;
        for (int n = 2; n <= 4; ++n) CHECK(m[1] > 2 * m[n]);
    }
    REQUIRE(rc.diagnostics.period);
    REQUIRE(rf.diagnostics.period);
    CHECK(std::abs(*rc.diagnostics.period / *rf.diagnostics.period - 1) < 5e-3);

    // The local kinetics have no such instability.
    SimConfig local = coarse;
    local.model = Kinetics::local;
    const RunResult rl = run(p, local, InitialCondition::fig1());
    CHECK(rl.diagnostics.converged_to == Convergence::steady);
}
