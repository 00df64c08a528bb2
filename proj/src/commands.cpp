#include "nonlocal_hopf/commands.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "nonlocal_hopf/hopf.hpp"
#include "nonlocal_hopf/linear_stability.hpp"
#include "nonlocal_hopf/normal_form.hpp"
#include "nonlocal_hopf/pde_sim.hpp"

namespace nlhopf {

namespace fs = std::filesystem;

namespace {

ojson base_report(const RunConfig& cfg) {
    return {{"tool_version", kToolVersion}, {"seed", cfg.seed}, {"input", cfg.echo}};
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CommandError(exit_config, "io", "cannot create output directory '" + cfg.out_dir + "'");
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CommandError(exit_internal, "io", "cannot write " + path.string());
    out << text;
}

std::string failing_modes_cell(const StabilityVerdict& v) {
    std::string s;
    for (const auto& f : v.failing_modes) {
        if (!s.empty()) s += ';';
        s += std::to_string(f.n);
    }
    return s;
}

ojson equilibrium_json(const ModelParams& p) {
    const double l = equilibrium_from_b(p).lambda;
    return {{"lambda", l}, {"verdict", to_json(classify_equilibrium(l, p))}};
}

ojson normal_form_entry(double lambda, const ModelParams& p) {
    ojson j;
    try {
        const HopfPoint hp = make_hopf_point(1, lambda, p);
        const EigenData ed = eigen_data(hp, p);
        const NormalizationResiduals res = normalization_residuals(ed, p);
        const HopfNormalForm nf = normal_form(hp, p);
        const G21Breakdown br = g21_finite(hp, p);
        j = {{"hopf_point", to_json(hp)},
             {"eigen", to_json(ed)},
             {"normalization", {{"qs_q_minus_one", std::abs(res.qs_q_minus_one)}, {"qs_qbar", std::abs(res.qs_qbar)}}},
             {"normal_form", to_json(nf)},
             {"breakdown", to_json(br)}};
    } catch (const DegenerateError& e) {
        j = {{"lambda", lambda}, {"error", {{"kind", "degenerate"}, {"message", e.what()}}}};
    }
    return j;
}

}  // namespace

int worker_count(std::size_t jobs) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NONLOCAL_HOPF_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) n = v;
    }
    n = std::max(1, n);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(1, jobs)));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
}

std::string plot_script(const std::string& csv_name, const ModelParams& params) {
    char range[64];
    std::snprintf(range, sizeof range, "%.17g", params.ell * 3.14159265358979323846);
    std::string s;
    s += "# Space-time surfaces of u and v.  Usage: gnuplot plot.gp\n";
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 1400,600\n";
    s += "set output 'surface.png'\n";
    s += "set pm3d map\n";
    s += "set xlabel 'x'\nset ylabel 't'\n";
    s += std::string("set xrange [0:") + range + "]\n";
    // pm3d needs a blank line between scans; one scan per sampled time.
    s += "data = \"< awk -F, 'NR > 1 { if (NR > 2 && $1 != prev) print \\\"\\\"; prev = $1; print }' " + csv_name +
         "\"\n";
    s += "set multiplot layout 1,2\n";
    s += "set title 'u(x,t)'\nsplot data using 2:1:3 with pm3d notitle\n";
    s += "set title 'v(x,t)'\nsplot data using 2:1:4 with pm3d notitle\n";
    s += "unset multiplot\n";
    return s;
}

CommandResult cmd_analyze(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    const RegimeReport rr = regime_classify(p);
    const fs::path dir = prepare_out(cfg);

    std::string csv = "lambda,b,verdict,failing_mode\n";
    const double lmax = 1.0 / p.beta;
    for (int i = 0; i < cfg.analyze_grid; ++i) {
        const double l = (i + 0.5) / cfg.analyze_grid * lmax;
        const StabilityVerdict v = classify_equilibrium(l, p);
        csv += format_double(l) + "," + format_double(b_from_lambda(p.beta, l)) + "," +
               (v.stable ? "stable" : "unstable") + "," + failing_modes_cell(v) + "\n";
    }

    CommandResult res;
    res.report = base_report(cfg);
    res.report["equilibrium"] = equilibrium_json(p);
    res.report["regime"] = to_json(rr);
    res.report["stability_map"] = "stability_map.csv";
    write_text(dir / "stability_map.csv", csv);
    write_text(dir / "report.json", dump_json(res.report));
    res.files = {"report.json", "stability_map.csv"};
    return res;
}

CommandResult cmd_hopf(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    const RegimeReport rr = regime_classify(p);
    const fs::path dir = prepare_out(cfg);
    CommandResult res;
    res.report = base_report(cfg);
    auto pair_json = [&](const std::optional<HopfPair>& pr, int mode) {
        if (!pr) return ojson(nullptr);
        return ojson{{"minus", to_json(make_hopf_point(mode, pr->minus, p))},
                     {"plus", to_json(make_hopf_point(mode, pr->plus, p))}};
    };
    res.report["mode1"] = pair_json(hopf_points_mode1(p), 1);
    res.report["mode0"] = pair_json(hopf_points_mode0(p), 0);
    res.report["regime"] = to_json(rr);
    write_text(dir / "report.json", dump_json(res.report));
    res.files = {"report.json"};
    return res;
}

CommandResult cmd_normalform(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    const auto m1 = hopf_points_mode1(p);
    if (!m1) {
        ojson detail = {{"thresholds", to_json(ell_thresholds(p))}};
        throw CommandError(exit_no_hopf, "no_hopf_points", "no mode-1 Hopf points for these parameters", detail);
    }
    const fs::path dir = prepare_out(cfg);
    CommandResult res;
    res.report = base_report(cfg);
    res.report["points"] = {{"minus", normal_form_entry(m1->minus, p)}, {"plus", normal_form_entry(m1->plus, p)}};
    ojson lim = ojson::object();
    for (Branch br : {Branch::minus, Branch::plus}) {
        const char* name = br == Branch::plus ? "plus" : "minus";
        try {
            lim[name] = to_json(limits_infinity(p.beta, p.c, br));
        } catch (const DomainError& e) {
            lim[name] = {{"error", e.what()}};
        }
    }
    res.report["limits"] = lim;
    write_text(dir / "report.json", dump_json(res.report));
    res.files = {"report.json"};
    return res;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    const InitialCondition ic = make_initial_condition(cfg.initial, p, cfg.seed);
    const fs::path dir = prepare_out(cfg);
    const auto xs = cell_centers(cfg.sim.n_cells, p.ell);

    std::ofstream traj(dir / "trajectory.csv", std::ios::binary);
    if (!traj) throw CommandError(exit_internal, "io", "cannot write trajectory.csv");
    traj << "t,x,u,v\n";
    auto observer = [&](const SimState& s) {
        char line[128];
        for (std::size_t j = 0; j < xs.size(); ++j) {
            std::snprintf(line, sizeof line, "%.10g,%.10g,%.12g,%.12g\n", s.t, xs[j], s.u[j], s.v[j]);
            traj << line;
        }
    };

    CommandResult res;
    res.report = base_report(cfg);
    res.files = {"trajectory.csv", "diagnostics.json", "plot.gp"};
    write_text(dir / "plot.gp", plot_script("trajectory.csv", p));
    try {
        const RunResult rr = run(p, cfg.sim, ic, observer);
        traj.close();
        res.report["diagnostics"] = to_json(rr.diagnostics);
        write_text(dir / "diagnostics.json", dump_json(res.report));
    } catch (const BlowUpError& e) {
        traj.close();
        res.report["error"] = {{"kind", "blow_up"}, {"time", e.time()}, {"message", e.what()}};
        write_text(dir / "diagnostics.json", dump_json(res.report));
        throw CommandError(exit_blow_up, "blow_up", e.what(), {{"time", e.time()}});
    }
    return res;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
    if (!cfg.sweep || cfg.sweep->values.empty()) {
        throw CommandError(exit_config, "config", "sweep: empty range", {{"key", "sweep.values"}});
    }
    const SweepSpec& sw = *cfg.sweep;
    const std::size_t n = sw.values.size();
    std::vector<ojson> rows(n);
    std::vector<std::string> lines(n);

    parallel_for(n, [&](std::size_t i) {
        ModelParams p = cfg.params;
        const double x = sw.values[i];
        switch (sw.axis) {
            case SweepAxis::b: p.b = x; break;
            case SweepAxis::ell: p.ell = x; break;
            case SweepAxis::beta: p.beta = x; break;
            case SweepAxis::c: p.c = x; break;
        }
        ojson row = {{"index", i}, {"value", x}};
        std::string cells[14];
        cells[0] = std::to_string(i);
        cells[1] = format_double(x);
        try {
            const double l = equilibrium_from_b(p).lambda;
            const StabilityVerdict v = classify_equilibrium(l, p);
            const RegimeReport rr = regime_classify(p);
            row["lambda"] = l;
            row["stable"] = v.stable;
            row["regime"] = to_string(rr.regime);
            cells[2] = format_double(l);
            cells[3] = v.stable ? "stable" : "unstable";
            cells[4] = to_string(rr.regime);
            if (const auto m1 = hopf_points_mode1(p)) {
                int k = 5;
                for (double lh : {m1->minus, m1->plus}) {
                    const char* tag = k == 5 ? "minus" : "plus";
                    const HopfPoint hp = make_hopf_point(1, lh, p);
                    cells[k] = format_double(lh);
                    cells[k + 2] = format_double(hp.b_equivalent);
                    ojson pt = {{"lambda", lh}, {"b", hp.b_equivalent}};
                    try {
                        const HopfNormalForm nf = normal_form(hp, p);
                        cells[k + 4] = format_double(nf.beta2);
                        cells[k + 6] = to_string(nf.orbit_stability);
                        pt["re_g21"] = nf.beta2;
                        pt["orbit_stability"] = to_string(nf.orbit_stability);
                    } catch (const DegenerateError& e) {
                        pt["error"] = e.what();
                    }
                    row[tag] = pt;
                    ++k;
                }
            }
        } catch (const std::exception& e) {
            row["error"] = e.what();
            std::string msg = e.what();
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            cells[13] = msg;
        }
        std::string line;
        for (int c = 0; c < 14; ++c) line += (c ? "," : "") + cells[c];
        rows[i] = std::move(row);
        lines[i] = std::move(line) + "\n";
    });

    // Single writer, in input order.
    const fs::path dir = prepare_out(cfg);
    std::string csv =
        "index,value,lambda,verdict,regime,lambda1_minus,lambda1_plus,b1_minus,b1_plus,re_g21_minus,re_g21_plus,"
        "orbit_minus,orbit_plus,error\n";
    for (const auto& l : lines) csv += l;
    CommandResult res;
    res.report = base_report(cfg);
    res.report["rows"] = rows;
    write_text(dir / "sweep.csv", csv);
    write_text(dir / "report.json", dump_json(res.report));
    res.files = {"report.json", "sweep.csv"};
    return res;
}

CommandResult run_command(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::analyze: return cmd_analyze(cfg);
        case Command::hopf: return cmd_hopf(cfg);
        case Command::normalform: return cmd_normalform(cfg);
        case Command::simulate: return cmd_simulate(cfg);
        case Command::sweep: return cmd_sweep(cfg);
    }
    return cmd_analyze(cfg);
}

int error_to_exit(const std::exception& e, ojson& err) {
    err = {{"message", e.what()}};
    int code = exit_internal;
    if (const auto* ce = dynamic_cast<const CommandError*>(&e)) {
        code = ce->code();
        err["kind"] = ce->kind();
        if (!ce->detail().empty()) err["detail"] = ce->detail();
    } else if (const auto* cfe = dynamic_cast<const ConfigError*>(&e)) {
        code = exit_config;
        err["kind"] = "config";
        if (!cfe->key().empty()) err["key"] = cfe->key();
        if (cfe->line() > 0) err["line"] = cfe->line();
    } else if (const auto* be = dynamic_cast<const BlowUpError*>(&e)) {
        code = exit_blow_up;
        err["kind"] = "blow_up";
        err["time"] = be->time();
    } else if (dynamic_cast<const DegenerateError*>(&e)) {
        code = exit_degenerate;
        err["kind"] = "degenerate";
    } else if (dynamic_cast<const DomainError*>(&e)) {
        code = exit_config;
        err["kind"] = "domain";
    } else {
        err["kind"] = "internal";
    }
    err["code"] = code;
    err = ojson{{"error", err}};
    return code;
}

}  // namespace nlhopf
