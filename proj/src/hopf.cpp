#include "nonlocal_hopf/hopf.hpp"

#include <algorithm>
#include <cmath>

#include "nonlocal_hopf/bisection.hpp"
#include "nonlocal_hopf/errors.hpp"

namespace nlhopf {

namespace {

constexpr double kInset = 1e-9;
constexpr double kRootTol = 1e-12;

bool strictly_increasing(std::initializer_list<double> xs) {
    return std::adjacent_find(xs.begin(), xs.end(), [](double a, double b) { return !(a < b); }) == xs.end();
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::unclassified: return "unclassified";
        case Regime::strong_stable: return "strong_stable";
        case Regime::strong_mode1_window: return "strong_mode1_window";
        case Regime::weak_stable: return "weak_stable";
        case Regime::weak_mode1_window: return "weak_mode1_window";
        case Regime::mode0_high_mode0_window: return "mode0_high_mode0_window";
        case Regime::mode0_high_interleaved: return "mode0_high_interleaved";
        case Regime::mode0_high_mode1_outer: return "mode0_high_mode1_outer";
        case Regime::mode0_low_mode0_window: return "mode0_low_mode0_window";
        case Regime::mode0_low_two_windows: return "mode0_low_two_windows";
        case Regime::mode0_low_interleaved: return "mode0_low_interleaved";
        case Regime::mode0_low_mode1_outer: return "mode0_low_mode1_outer";
    }
    return "unknown";
}

std::string to_string(Profile p) { return p == Profile::homogeneous ? "homogeneous" : "nonhomogeneous"; }

std::optional<HopfPair> hopf_points_mode1(const ModelParams& params) {
    params.validate();
    const double lambda2 = critical_points(params.beta).lambda2;
    // T_1 peaks at lambda2; two roots exist iff the peak value is positive,
    // i.e. c < p2(lambda2) and ell > ell_1.
    if (!(trace_T(1, lambda2, params) > 0.0)) return std::nullopt;
    auto t1 = [&](double l) { return trace_T(1, l, params); };
    HopfPair pair;
    pair.minus = bisect(t1, kInset, lambda2 - kInset, kRootTol);
    pair.plus = bisect(t1, lambda2 + kInset, 1.0 / params.beta - kInset, kRootTol);
    return pair;
}

std::optional<HopfPair> hopf_points_mode0(const ModelParams& params) {
    params.validate();
    if (params.beta >= 1.0) return std::nullopt;
    const double lambda3 = *critical_points(params.beta).lambda3;
    if (!(params.c < p_curve(PCurve::p3, lambda3, params.beta, params.c))) return std::nullopt;
    auto t0 = [&](double l) { return trace_T(0, l, params); };
    HopfPair pair;
    pair.minus = bisect(t0, kInset, lambda3 - kInset, kRootTol);
    pair.plus = bisect(t0, lambda3 + kInset, 1.0 / params.beta - kInset, kRootTol);
    return pair;
}

EllThresholds ell_thresholds(const ModelParams& params) {
    params.validate();
    EllThresholds th;
    const double lambda2 = critical_points(params.beta).lambda2;
    const double gap = p_curve(PCurve::p2, lambda2, params.beta, params.c) - params.c;
    if (gap > 0.0) th.ell_1 = std::sqrt((params.d1 + params.d2) / gap);
    if (auto m0 = hopf_points_mode0(params)) {
        th.ell_tilde_plus = std::sqrt((params.d1 + params.d2) / (params.beta * m0->plus));
        th.ell_tilde_minus = std::sqrt((params.d1 + params.d2) / (params.beta * m0->minus));
    }
    return th;
}

double transversality(int mode, double lambda, const ModelParams& params) {
    // Re(mu) = T_mode / 2 near the crossing; T_1 = p2 - const, T_0 = p3 - c.
    switch (mode) {
        case 0: return 0.5 * p_curve_derivative(PCurve::p3, lambda, params.beta, params.c);
        case 1: return 0.5 * p_curve_derivative(PCurve::p2, lambda, params.beta, params.c);
        default: throw DomainError("transversality is only defined for modes 0 and 1");
    }
}

double transversality(const HopfPoint& point, const ModelParams& params) {
    return transversality(point.mode, point.lambda, params);
}

HopfPoint make_hopf_point(int mode, double lambda, const ModelParams& params) {
    const double det = det_D(mode, lambda, params);
    if (!(det > 0.0)) throw DegenerateError("determinant not positive at Hopf candidate");
    HopfPoint p;
    p.lambda = lambda;
    p.mode = mode;
    p.omega = std::sqrt(det);
    p.transversality = transversality(mode, lambda, params);
    p.profile = mode == 0 ? Profile::homogeneous : Profile::nonhomogeneous;
    p.b_equivalent = b_from_lambda(params.beta, lambda);
    const int other = mode == 0 ? 1 : 0;
    p.primary = trace_T(other, lambda, params) < 0.0;
    return p;
}

bool determinant_condition_holds(const ModelParams& params) {
    params.validate();
    const double lambda1 = critical_points(params.beta).lambda1;
    return params.d1 / params.d2 > p_curve(PCurve::p1, lambda1, params.beta, params.c);
}

RegimeReport regime_classify(const ModelParams& params) {
    params.validate();
    RegimeReport rep;
    rep.critical = critical_points(params.beta);
    rep.thresholds = ell_thresholds(params);
    if (!determinant_condition_holds(params)) {
        rep.regime = Regime::unclassified;
        rep.note = "outside analyzed regime: d1/d2 <= max p1, determinants may change sign";
        return rep;
    }

    const double lmax = 1.0 / params.beta;
    const double lambda2 = rep.critical.lambda2;
    const double p2max = p_curve(PCurve::p2, lambda2, params.beta, params.c);
    const auto m1 = hopf_points_mode1(params);
    const auto m0 = hopf_points_mode0(params);
    const auto& th = rep.thresholds;
    const double ell = params.ell;

    if (params.c == p2max || (th.ell_1 && ell == *th.ell_1)) rep.degenerate_boundary = true;
    if (params.beta < 1.0 && params.c == p_curve(PCurve::p3, *rep.critical.lambda3, params.beta, params.c)) {
        rep.degenerate_boundary = true;
    }

    auto add = [&](int mode, double l) { rep.hopf_points.push_back(make_hopf_point(mode, l, params)); };

    if (!m0) {
        const bool strong = params.beta >= 1.0;
        if (!m1) {
            rep.regime = strong ? Regime::strong_stable : Regime::weak_stable;
            rep.stable_intervals = {{0.0, lmax}};
        } else {
            rep.regime = strong ? Regime::strong_mode1_window : Regime::weak_mode1_window;
            rep.stable_intervals = {{0.0, m1->minus}, {m1->plus, lmax}};
            rep.unstable_intervals = {{m1->minus, m1->plus}};
            rep.ordering_holds = strictly_increasing({0.0, m1->minus, lambda2, m1->plus, lmax});
            add(1, m1->minus);
            add(1, m1->plus);
        }
    } else {
        const double l0m = m0->minus;
        const double l0p = m0->plus;
        const double ltp = *th.ell_tilde_plus;
        const double ltm = *th.ell_tilde_minus;
        if (l0p == lambda2 || ell == ltp || ell == ltm) rep.degenerate_boundary = true;
        add(0, l0m);
        add(0, l0p);
        if (m1) {
            add(1, m1->minus);
            add(1, m1->plus);
        }
        if (l0p > lambda2) {
            if (ell <= ltp || !m1) {
                rep.regime = Regime::mode0_high_mode0_window;
                rep.stable_intervals = {{0.0, l0m}, {l0p, lmax}};
                rep.unstable_intervals = {{l0m, l0p}};
                rep.ordering_holds = strictly_increasing({l0m, lambda2, l0p});
            } else if (ell <= ltm) {
                rep.regime = Regime::mode0_high_interleaved;
                rep.stable_intervals = {{0.0, l0m}, {m1->plus, lmax}};
                rep.unstable_intervals = {{l0m, m1->plus}};
                rep.ordering_holds = strictly_increasing({l0m, m1->minus, lambda2, l0p, m1->plus});
            } else {
                rep.regime = Regime::mode0_high_mode1_outer;
                rep.stable_intervals = {{0.0, m1->minus}, {m1->plus, lmax}};
                rep.unstable_intervals = {{m1->minus, m1->plus}};
                rep.ordering_holds = strictly_increasing({m1->minus, l0m, lambda2, l0p, m1->plus});
            }
        } else {
            if (!m1) {
                rep.regime = Regime::mode0_low_mode0_window;
                rep.stable_intervals = {{0.0, l0m}, {l0p, lmax}};
                rep.unstable_intervals = {{l0m, l0p}};
                rep.ordering_holds = strictly_increasing({l0m, l0p, lambda2});
            } else if (ell <= ltp) {
                rep.regime = Regime::mode0_low_two_windows;
                rep.stable_intervals = {{0.0, l0m}, {l0p, m1->minus}, {m1->plus, lmax}};
                rep.unstable_intervals = {{l0m, l0p}, {m1->minus, m1->plus}};
                rep.ordering_holds = strictly_increasing({l0m, l0p, m1->minus, lambda2, m1->plus});
            } else if (ell <= ltm) {
                rep.regime = Regime::mode0_low_interleaved;
                rep.stable_intervals = {{0.0, l0m}, {m1->plus, lmax}};
                rep.unstable_intervals = {{l0m, m1->plus}};
                rep.ordering_holds = strictly_increasing({l0m, m1->minus, l0p, lambda2, m1->plus});
            } else {
                rep.regime = Regime::mode0_low_mode1_outer;
                rep.stable_intervals = {{0.0, m1->minus}, {m1->plus, lmax}};
                rep.unstable_intervals = {{m1->minus, m1->plus}};
                rep.ordering_holds = strictly_increasing({m1->minus, l0m, l0p, lambda2, m1->plus});
            }
        }
    }

    std::sort(rep.hopf_points.begin(), rep.hopf_points.end(),
              [](const HopfPoint& a, const HopfPoint& b) { return a.lambda < b.lambda; });
    for (std::size_t i = 1; i < rep.hopf_points.size(); ++i) {
        if (rep.hopf_points[i].lambda == rep.hopf_points[i - 1].lambda) rep.degenerate_boundary = true;
    }

    // Higher modes can only cross while mode 1 is already unstable.
    const int cutoff = mode_cutoff(params);
    for (int n = 2; n <= cutoff; ++n) {
        if (!(trace_T(n, lambda2, params) > 0.0)) break;
        auto tn = [&](double l) { return trace_T(n, l, params); };
        rep.higher_mode_crossings.push_back({n, bisect(tn, kInset, lambda2 - kInset, kRootTol)});
        rep.higher_mode_crossings.push_back({n, bisect(tn, lambda2 + kInset, lmax - kInset, kRootTol)});
    }
    return rep;
}

}  // namespace nlhopf
