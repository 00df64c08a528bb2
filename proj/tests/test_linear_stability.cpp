#include <doctest.h>

#include <cmath>
#include <random>

#include "nonlocal_hopf/errors.hpp"
#include "nonlocal_hopf/hopf.hpp"
#include "nonlocal_hopf/linear_stability.hpp"
#include "test_support.hpp"

using namespace nlhopf;
using testsupport::strong_set;

TEST_CASE("trace examples") {
    const ModelParams p{1.0, 1.0, 1.0, 1.0, 0.1, 10.0};
    CHECK(trace_T(0, 0.5, p) == doctest::Approx(-0.1 - 0.5 / 1.5).epsilon(1e-14));
    const auto pair = hopf_points_mode1(strong_set());
    REQUIRE(pair);
    CHECK(std::abs(trace_T(1, pair->plus, strong_set())) <= 1e-12);
    // Quadratic tail in n.
    double prev = trace_T(1, 0.3, strong_set());
    for (int n = 2; n < 200; ++n) {
        const double t = trace_T(n, 0.3, strong_set());
        CHECK(t < prev);
        prev = t;
    }
    CHECK(prev < -300.0);
    CHECK_THROWS_AS(trace_T(0, 0.0, p), DomainError);
    CHECK_THROWS_AS(trace_T(0, 1.0, p), DomainError);
    CHECK_THROWS_AS(trace_T(-1, 0.5, p), DomainError);
}

TEST_CASE("determinant examples") {
    const ModelParams p = strong_set();
    CHECK(det_D(0, 0.4, p) == doctest::Approx(0.15 * 0.4 + 0.1 * 0.4 / 1.4).epsilon(1e-14));
    CHECK(det_D(0, 0.4, p) == doctest::Approx(0.088571).epsilon(1e-5));
    for (double l : {0.01, 0.2, 0.4, 0.6}) {
        CHECK(det_D(1, l, p) == D_of_p(l, 1.0 / (p.ell * p.ell), p));
        for (int n = 1; n < 20; ++n) {
            const double k2 = double(n) * n / (p.ell * p.ell);
            const double d = det_D(n, l, p);
            CHECK(std::abs(d - D_of_p(l, k2, p)) <= 4e-16 * std::max(1.0, std::abs(d)));
            // Determinant of the mode-n symbol, written out independently.
            const double a11 = l * (1 - p.beta * l) / (1 + l) - p.d1 * k2;
            const double a12 = -(1 - p.beta * l);
            const double a21 = p.c;
            const double a22 = -p.c - p.d2 * k2;
            CHECK(d == doctest::Approx(a11 * a22 - a12 * a21).epsilon(1e-12));
        }
    }
    CHECK(D_of_p(0.3, 0.0, p) == doctest::Approx(0.1 * (1 - 0.45) / 1.3).epsilon(1e-15));
    CHECK_THROWS_AS(D_of_p(0.3, -1.0, p), DomainError);
}

TEST_CASE("mode-0 symbol includes the nonlocal term") {
    const ModelParams p = strong_set();
    for (double l : {0.05, 0.3, 0.6}) {
        const double k = 1 - p.beta * l;
        const double a11 = l * k / (1 + l) - p.beta * l;
        const double a12 = -k;
        CHECK(trace_T(0, l, p) == doctest::Approx(a11 - p.c).epsilon(1e-13));
        CHECK(det_D(0, l, p) == doctest::Approx(-a11 * p.c - a12 * p.c).epsilon(1e-13));
    }
}

TEST_CASE("determinant condition is equivalent to d1/d2 > p1(lambda)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int tested = 0;
    while (tested < 200) {
        ModelParams p;
        p.beta = 0.1 + 2.0 * unit(rng);
        p.c = 0.02 + 0.5 * unit(rng);
        p.d2 = 0.2 + 2.0 * unit(rng);
        const double l = (0.02 + 0.96 * unit(rng)) / p.beta;
        const double p1 = p_curve(PCurve::p1, l, p.beta, p.c);
        const double ratio = p1 * (0.2 + 1.6 * unit(rng));
        if (std::abs(ratio / p1 - 1.0) < 0.02) continue;
        p.d1 = ratio * p.d2;
        // Brute-force minimum over a dense p-grid.
        const double phat = std::max(0.0, (p.d2 * p_curve(PCurve::p2, l, p.beta, p.c) - p.d1 * p.c) /
                                              (2 * p.d1 * p.d2));
        const double pmax = 2.0 * phat + 1.0;
        bool all_positive = true;
        for (int i = 0; i <= 100000; ++i) {
            if (D_of_p(l, pmax * i / 100000.0, p) <= 0.0) {
                all_positive = false;
                break;
            }
        }
        CHECK(all_positive == (ratio > p1));
        ++tested;
    }
}

TEST_CASE("p-curve values and identities") {
    const double l2 = std::sqrt(6.0) - 1.0;
    CHECK(p_curve(PCurve::p2, l2, 0.2, 0.2) == doctest::Approx(0.42020).epsilon(1e-4));
    CHECK(p_curve(PCurve::p2, 0.0, 0.2, 0.2) == 0.0);
    CHECK(std::abs(p_curve(PCurve::p2, 5.0, 0.2, 0.2)) <= 1e-15);
    for (double beta : {0.1, 0.5, 1.0, 2.0}) {
        for (int i = 1; i < 100; ++i) {
            const double l = i / (100.0 * beta);
            CHECK(p_curve(PCurve::p3, l, beta, 0.1) ==
                  doctest::Approx(p_curve(PCurve::p2, l, beta, 0.1) - beta * l).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(p_curve(PCurve::p2, -0.1, 0.2, 0.2), DomainError);
    CHECK_THROWS_AS(p_curve(PCurve::p2, 5.1, 0.2, 0.2), DomainError);
}

TEST_CASE("p-curve derivatives match central differences") {
    for (double beta : {0.2, 0.7, 1.5}) {
        for (PCurve w : {PCurve::p1, PCurve::p2, PCurve::p3}) {
            for (int i = 1; i < 20; ++i) {
                const double l = i / (20.0 * beta);
                const double h = 1e-6;
                const double fd = (p_curve(w, l + h, beta, 0.3) - p_curve(w, l - h, beta, 0.3)) / (2 * h);
                CHECK(p_curve_derivative(w, l, beta, 0.3) == doctest::Approx(fd).epsilon(1e-6).scale(1e-3));
            }
        }
    }
}

TEST_CASE("critical points") {
    const auto cp = critical_points(0.2);
    CHECK(cp.lambda2 == doctest::Approx(std::sqrt(6.0) - 1.0).epsilon(1e-15));
    CHECK(cp.lambda2 == doctest::Approx(1.44949).epsilon(1e-5));
    REQUIRE(cp.lambda3);
    CHECK(*cp.lambda3 == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-15));
    CHECK(*critical_points(1.0).lambda3 == 0.0);
    CHECK_FALSE(critical_points(1.5).lambda3);

    const auto c15 = critical_points(1.5);
    CHECK(std::abs(p_curve_derivative(PCurve::p1, c15.lambda1, 1.5, 0.1)) <= 1e-10);
    const double h = 1e-4;
    auto fd = [](double l) {
        return (p_curve(PCurve::p1, l + 1e-7, 1.5, 0.1) - p_curve(PCurve::p1, l - 1e-7, 1.5, 0.1)) / 2e-7;
    };
    CHECK(fd(c15.lambda1 - h) > 0.0);
    CHECK(fd(c15.lambda1 + h) < 0.0);
}

TEST_CASE("p-curve shapes around their critical points") {
    for (double beta : {0.1, 0.3, 0.8, 1.0, 1.5, 4.0}) {
        const auto cp = critical_points(beta);
        auto check_shape = [&](PCurve w, double peak) {
            const int n = 4000;
            for (int i = 1; i < n - 1; ++i) {
                const double a = i / (n * beta), b = (i + 1) / (n * beta);
                const double fa = p_curve(w, a, beta, 0.1), fb = p_curve(w, b, beta, 0.1);
                if (b < peak) CHECK(fb > fa);
                if (a > peak) CHECK(fb < fa);
            }
        };
        check_shape(PCurve::p2, cp.lambda2);
        check_shape(PCurve::p1, cp.lambda1);
        if (beta < 1.0) check_shape(PCurve::p3, *cp.lambda3);
    }
}

TEST_CASE("mode eigenvalues") {
    auto r = quadratic_roots(0.0, 4.0);
    CHECK(r[0].real() == 0.0);
    CHECK(std::abs(r[0].imag()) == doctest::Approx(2.0));
    CHECK(r[0] == std::conj(r[1]));
    r = quadratic_roots(-2.0, 1.0);
    CHECK(r[0] == std::complex<double>(-1.0));
    CHECK(r[1] == std::complex<double>(-1.0));

    const ModelParams p = strong_set();
    const double lp = hopf_points_mode1(p)->plus;
    const auto mu = mode_eigenvalues(1, lp, p);
    CHECK(std::abs(mu[0].real()) <= 1e-12);
    CHECK(std::abs(mu[0].imag()) == doctest::Approx(std::sqrt(det_D(1, lp, p))).epsilon(1e-12));
    for (double l : {0.1, 0.3, 0.5}) {
        for (int n : {0, 1, 2, 5}) {
            const auto m = mode_eigenvalues(n, l, p);
            for (const auto& z : m) {
                CHECK(std::abs(z * z - trace_T(n, l, p) * z + det_D(n, l, p)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("classify_equilibrium examples") {
    const ModelParams p = strong_set();
    const auto pair = hopf_points_mode1(p);
    REQUIRE(pair);
    const StabilityVerdict v = classify_equilibrium(0.5 * (pair->minus + pair->plus), p);
    CHECK_FALSE(v.stable);
    REQUIRE(v.failing_modes.size() >= 1);
    CHECK(v.failing_modes[0].n == 1);
    CHECK(v.failing_modes[0].reason == FailureReason::trace_nonnegative);

    // beta >= 1 and c >= max p2: stable everywhere.
    const ModelParams q{0.8, 1.0, 1.5, 1.0, 0.5, 10.0};
    for (int i = 1; i < 500; ++i) CHECK(classify_equilibrium(i / (500.0 * q.beta), q).stable);
    CHECK(classify_equilibrium(1e-9, p).stable);
}

TEST_CASE("determinants positive when d1/d2 > max p1") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const ModelParams p = testsupport::random_classifiable(rng);
        const int nmax = mode_cutoff(p);
        for (int i = 1; i < 100; ++i) {
            const double l = i / (100.0 * p.beta);
            for (int n = 0; n <= nmax; ++n) CHECK(det_D(n, l, p) > 0.0);
        }
    }
}

TEST_CASE("mode cutoff certificate") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 50; ++k) {
        const ModelParams p = testsupport::random_classifiable(rng);
        const int nmax = mode_cutoff(p);
        for (int n = nmax + 1; n <= nmax + 40; ++n) {
            for (int i = 1; i < 200; ++i) {
                const double l = i / (200.0 * p.beta);
                CHECK(trace_T(n, l, p) < 0.0);
                CHECK(det_D(n, l, p) > 0.0);
            }
        }
    }
}

TEST_CASE("T0 negative for beta >= 1") {
    for (double beta : {1.0, 1.5, 3.0}) {
        const ModelParams p{1, 1, beta, 1, 0.01, 1};
        for (int i = 1; i < 1000; ++i) CHECK(trace_T(0, i / (1000.0 * beta), p) < 0.0);
    }
}
