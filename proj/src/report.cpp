#include "nonlocal_hopf/report.hpp"

#include <cmath>
#include <cstdio>

namespace nlhopf {

namespace {

void write(const ojson& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + ojson(it.key()).dump() + ": ";
                write(it.value(), out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                write(j[i], out, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case ojson::value_t::number_float: out += format_double(j.get<double>()); return;
        default: out += j.dump(); return;
    }
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep a float-looking token so integral values parse back as doubles.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string dump_json(const ojson& j) {
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

ojson complex_json(std::complex<double> z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

ojson to_json(const ModelParams& p) {
    return {{"d1", p.d1}, {"d2", p.d2}, {"beta", p.beta}, {"b", p.b}, {"c", p.c}, {"ell", p.ell}};
}

ojson to_json(const CriticalPoints& cp) {
    ojson j = {{"lambda1", cp.lambda1}, {"lambda2", cp.lambda2}};
    j["lambda3"] = cp.lambda3 ? ojson(*cp.lambda3) : ojson(nullptr);
    return j;
}

ojson to_json(const EllThresholds& t) {
    auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
    return {{"ell_1", opt(t.ell_1)}, {"ell_tilde_plus", opt(t.ell_tilde_plus)},
            {"ell_tilde_minus", opt(t.ell_tilde_minus)}};
}

ojson to_json(const HopfPoint& h) {
    return {{"lambda", h.lambda},
            {"b", h.b_equivalent},
            {"mode", h.mode},
            {"omega", h.omega},
            {"transversality", h.transversality},
            {"profile", to_string(h.profile)},
            {"primary", h.primary}};
}

ojson to_json(const RegimeReport& r) {
    auto intervals = [](const std::vector<Interval>& v) {
        ojson a = ojson::array();
        for (const auto& i : v) a.push_back(ojson::array({i.lo, i.hi}));
        return a;
    };
    ojson pts = ojson::array();
    for (const auto& h : r.hopf_points) pts.push_back(to_json(h));
    ojson higher = ojson::array();
    for (const auto& h : r.higher_mode_crossings) higher.push_back({{"mode", h.mode}, {"lambda", h.lambda}});
    return {{"regime", to_string(r.regime)},
            {"note", r.note},
            {"degenerate_boundary", r.degenerate_boundary},
            {"ordering_holds", r.ordering_holds},
            {"stable_intervals", intervals(r.stable_intervals)},
            {"unstable_intervals", intervals(r.unstable_intervals)},
            {"hopf_points", pts},
            {"higher_mode_crossings", higher},
            {"thresholds", to_json(r.thresholds)},
            {"critical_points", to_json(r.critical)}};
}

ojson to_json(const StabilityVerdict& v) {
    ojson modes = ojson::array();
    for (const auto& f : v.failing_modes) {
        modes.push_back({{"n", f.n},
                         {"reason", f.reason == FailureReason::trace_nonnegative ? "trace_nonnegative"
                                                                                 : "det_nonpositive"}});
    }
    return {{"stable", v.stable}, {"failing_modes", modes}, {"n_checked", v.n_checked}};
}

ojson to_json(const EigenData& e) {
    return {{"lambda_star", e.lambda_star}, {"omega_star", e.omega_star}, {"q2", complex_json(e.q2)},
            {"q2_star", complex_json(e.q2_star)}, {"D", complex_json(e.D)}};
}

ojson to_json(const HopfNormalForm& nf) {
    return {{"lambda_star", nf.lambda_star},
            {"b_star", nf.b_star},
            {"g21", complex_json(nf.g21)},
            {"C1", complex_json(nf.C1)},
            {"mu2", nf.mu2},
            {"beta2", nf.beta2},
            {"transversality", nf.transversality},
            {"direction_lambda", to_string(nf.direction)},
            {"direction_b", to_string(nf.direction_in_b)},
            {"orbit_stability", to_string(nf.orbit_stability)}};
}

ojson to_json(const G21Breakdown& g) {
    ojson gam = ojson::array(), a = ojson::array(), b = ojson::array();
    for (const auto& z : g.coeffs.gamma) gam.push_back(complex_json(z));
    for (const auto& z : g.coeffs.a) a.push_back(complex_json(z));
    for (const auto& z : g.coeffs.b) b.push_back(complex_json(z));
    return {{"g20", complex_json(g.g20)}, {"g11", complex_json(g.g11)}, {"g02", complex_json(g.g02)},
            {"A1", complex_json(g.A1)},   {"A2", complex_json(g.A2)},   {"A3", complex_json(g.A3)},
            {"gamma", gam},               {"a", a},                     {"b", b}};
}

ojson to_json(const AsymptoticLimits& L) {
    auto arr = [](const auto& v) {
        ojson a = ojson::array();
        for (const auto& z : v) a.push_back(complex_json(z));
        return a;
    };
    return {{"branch", L.branch == Branch::plus ? "plus" : "minus"},
            {"lambda_inf", L.lambda_inf},
            {"omega_inf", L.omega_inf},
            {"b_inf", L.b_inf},
            {"q2", complex_json(L.q2)},
            {"q2_star", complex_json(L.q2_star)},
            {"D", complex_json(L.D)},
            {"gamma", arr(L.gamma)},
            {"a", arr(L.a)},
            {"b", arr(L.b)},
            {"A1", complex_json(L.A1)},
            {"A2", complex_json(L.A2)},
            {"A3", complex_json(L.A3)},
            {"re_A1", L.re_A1},
            {"re_A2", L.re_A2},
            {"re_A3", L.re_A3},
            {"re_g21", L.re_g21}};
}

ojson to_json(const OrbitDiagnostics& d) {
    ojson modes = ojson::array();
    for (double m : d.mode_amp) modes.push_back(m);
    return {{"converged_to", to_string(d.converged_to)},
            {"period", d.period ? ojson(*d.period) : ojson(nullptr)},
            {"amplitude_u", d.amplitude_u},
            {"mode_amp", modes},
            {"peak_count", d.peak_count},
            {"lambda", d.lambda},
            {"final_deviation", d.final_deviation},
            {"final_spatial_variation", d.final_spatial_variation}};
}

}  // namespace nlhopf
