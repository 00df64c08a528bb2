#include "nonlocal_hopf/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "nonlocal_hopf/expression.hpp"

namespace nlhopf {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// 1-based line of the first occurrence of "key" in the source text.
int line_of_key(const std::string& source, const std::string& key) {
    if (source.empty()) return 0;
    const auto pos = source.find('"' + key + '"');
    if (pos == std::string::npos) return 0;
    int line = 1;
    for (std::size_t i = 0; i < pos; ++i)
        if (source[i] == '\n') ++line;
    return line;
}

std::string last_segment(const std::string& path) {
    const auto dot = path.rfind('.');
    return dot == std::string::npos ? path : path.substr(dot + 1);
}

class Reader {
public:
    explicit Reader(const std::string& source) : source_(source) {}

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        throw ConfigError(path + ": " + msg, path, line_of_key(source_, last_segment(path)));
    }

    void require_object(const json& j, const std::string& path) const {
        if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    }

    void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) const {
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!ok.count(it.key())) fail(join(path, it.key()), "unknown key");
        }
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    double number(const json& j, const std::string& path) const {
        if (!j.is_number()) fail(path, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v)) fail(path, "expected a finite number");
        return v;
    }
    double positive(const json& j, const std::string& path) const {
        const double v = number(j, path);
        if (!(v > 0.0)) fail(path, "must be positive");
        return v;
    }
    long long integer(const json& j, const std::string& path) const {
        if (!j.is_number_integer()) fail(path, "expected an integer");
        return j.get<long long>();
    }
    std::string string(const json& j, const std::string& path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

private:
    const std::string& source_;
};

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::analyze: return "analyze";
        case Command::hopf: return "hopf";
        case Command::normalform: return "normalform";
        case Command::simulate: return "simulate";
        case Command::sweep: return "sweep";
    }
    return "analyze";
}

std::optional<Command> command_from_string(const std::string& s) {
    for (Command c : {Command::analyze, Command::hopf, Command::normalform, Command::simulate, Command::sweep}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::b: return "b";
        case SweepAxis::ell: return "ell";
        case SweepAxis::beta: return "beta";
        case SweepAxis::c: return "c";
    }
    return "b";
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects key=value, got '" + assignment + "'", assignment);
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw ConfigError("empty segment in --set key '" + key + "'", key);
        parts.push_back(part);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) throw ConfigError("--set path '" + key + "' crosses a non-object", key);
        node = &(*node)[parts[i]];
        if (node->is_null()) *node = json::object();
    }
    if (!node->is_object()) throw ConfigError("--set path '" + key + "' crosses a non-object", key);
    (*node)[parts.back()] = value;
}

RunConfig parse_config(Command command, const json& doc, const std::string& source) {
    Reader r(source);
    r.require_object(doc, "");
    r.only_keys(doc, "", {"params", "raw_params", "sim", "sweep", "analyze", "seed", "out"});

    RunConfig cfg;
    cfg.command = command;
    ordered_json echo;
    echo["command"] = to_string(command);

    if (doc.contains("params") == doc.contains("raw_params")) {
        r.fail("params", "exactly one of params or raw_params is required");
    }
    if (doc.contains("params")) {
        const json& p = doc["params"];
        r.require_object(p, "params");
        r.only_keys(p, "params", {"d1", "d2", "beta", "b", "c", "ell"});
        for (const char* k : {"d1", "d2", "beta", "b", "c", "ell"}) {
            if (!p.contains(k)) r.fail(std::string("params.") + k, "missing");
        }
        cfg.params = ModelParams{r.positive(p["d1"], "params.d1"), r.positive(p["d2"], "params.d2"),
                                 r.positive(p["beta"], "params.beta"), r.positive(p["b"], "params.b"),
                                 r.positive(p["c"], "params.c"),     r.positive(p["ell"], "params.ell")};
    } else {
        const json& p = doc["raw_params"];
        r.require_object(p, "raw_params");
        r.only_keys(p, "raw_params", {"a", "b", "c", "e", "k", "m", "d1", "d2", "domain_length"});
        RawParams raw;
        auto get = [&](const char* k, double& dst) {
            const std::string path = std::string("raw_params.") + k;
            if (!p.contains(k)) r.fail(path, "missing");
            dst = r.positive(p[k], path);
        };
        get("a", raw.a);
        get("b", raw.b);
        get("c", raw.c);
        get("e", raw.e);
        get("k", raw.k);
        get("m", raw.m);
        get("d1", raw.d1);
        get("d2", raw.d2);
        get("domain_length", raw.domain_length);
        cfg.raw = raw;
        cfg.params = nondimensionalize(raw);
        echo["raw_params"] = {{"a", raw.a}, {"b", raw.b}, {"c", raw.c}, {"e", raw.e}, {"k", raw.k},
                              {"m", raw.m}, {"d1", raw.d1}, {"d2", raw.d2}, {"domain_length", raw.domain_length}};
    }
    const ModelParams& mp = cfg.params;
    echo["params"] = {{"d1", mp.d1}, {"d2", mp.d2}, {"beta", mp.beta}, {"b", mp.b}, {"c", mp.c}, {"ell", mp.ell}};

    if (doc.contains("seed")) {
        const long long s = r.integer(doc["seed"], "seed");
        if (s < 0) r.fail("seed", "must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    echo["seed"] = cfg.seed;
    if (doc.contains("out")) cfg.out_dir = r.string(doc["out"], "out");

    if (doc.contains("analyze")) {
        const json& a = doc["analyze"];
        r.require_object(a, "analyze");
        r.only_keys(a, "analyze", {"grid"});
        if (a.contains("grid")) {
            const long long g = r.integer(a["grid"], "analyze.grid");
            if (g < 2 || g > 1000000) r.fail("analyze.grid", "must lie in [2, 1e6]");
            cfg.analyze_grid = static_cast<int>(g);
        }
    }
    if (command == Command::analyze) echo["analyze"] = {{"grid", cfg.analyze_grid}};

    cfg.sim = default_sim_config(mp.ell);
    if (doc.contains("sim")) {
        const json& s = doc["sim"];
        r.require_object(s, "sim");
        r.only_keys(s, "sim",
                    {"n_cells", "dt", "t_end", "scheme", "model", "transient_fraction", "probe_index",
                     "sample_interval", "initial"});
        if (s.contains("n_cells")) cfg.sim.n_cells = static_cast<int>(r.integer(s["n_cells"], "sim.n_cells"));
        if (s.contains("dt")) cfg.sim.dt = r.positive(s["dt"], "sim.dt");
        if (s.contains("t_end")) cfg.sim.t_end = r.positive(s["t_end"], "sim.t_end");
        if (s.contains("scheme")) {
            const std::string v = r.string(s["scheme"], "sim.scheme");
            if (v == "imex") cfg.sim.scheme = Scheme::imex;
            else if (v == "explicit") cfg.sim.scheme = Scheme::explicit_euler;
            else r.fail("sim.scheme", "expected imex or explicit");
        }
        if (s.contains("model")) {
            const std::string v = r.string(s["model"], "sim.model");
            if (v == "nonlocal") cfg.sim.model = Kinetics::nonlocal;
            else if (v == "local") cfg.sim.model = Kinetics::local;
            else r.fail("sim.model", "expected nonlocal or local");
        }
        if (s.contains("transient_fraction")) {
            cfg.sim.transient_fraction = r.number(s["transient_fraction"], "sim.transient_fraction");
        }
        if (s.contains("probe_index")) {
            cfg.sim.probe_index = static_cast<int>(r.integer(s["probe_index"], "sim.probe_index"));
        }
        if (s.contains("sample_interval")) {
            cfg.sim.sample_interval = r.number(s["sample_interval"], "sim.sample_interval");
        }
        if (s.contains("initial")) {
            const json& ic = s["initial"];
            r.require_object(ic, "sim.initial");
            r.only_keys(ic, "sim.initial", {"type", "level", "u", "v", "noise"});
            if (ic.contains("type")) cfg.initial.type = r.string(ic["type"], "sim.initial.type");
            const std::string& t = cfg.initial.type;
            if (t != "constant" && t != "fig1" && t != "fig2" && t != "custom") {
                r.fail("sim.initial.type", "expected constant, fig1, fig2 or custom");
            }
            if (ic.contains("level")) {
                if (t != "constant") r.fail("sim.initial.level", "only valid for type constant");
                cfg.initial.level = r.positive(ic["level"], "sim.initial.level");
            }
            for (const char* k : {"u", "v"}) {
                const std::string path = std::string("sim.initial.") + k;
                if (ic.contains(k)) {
                    if (t != "custom") r.fail(path, "only valid for type custom");
                    (k[0] == 'u' ? cfg.initial.u_expr : cfg.initial.v_expr) = r.string(ic[k], path);
                } else if (t == "custom") {
                    r.fail(path, "missing");
                }
            }
            if (ic.contains("noise")) {
                cfg.initial.noise = r.number(ic["noise"], "sim.initial.noise");
                if (!(cfg.initial.noise >= 0.0 && cfg.initial.noise < 1.0)) {
                    r.fail("sim.initial.noise", "must lie in [0, 1)");
                }
            }
        }
    }
    if (command == Command::simulate) {
        try {
            cfg.sim.validate(mp);
            (void)init_state(cfg.sim, mp, make_initial_condition(cfg.initial, mp, cfg.seed));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("sim: ") + e.what(), "sim", line_of_key(source, "sim"));
        }
        ordered_json init = {{"type", cfg.initial.type}};
        if (cfg.initial.level) init["level"] = *cfg.initial.level;
        if (cfg.initial.type == "custom") {
            init["u"] = cfg.initial.u_expr;
            init["v"] = cfg.initial.v_expr;
        }
        init["noise"] = cfg.initial.noise;
        echo["sim"] = {{"n_cells", cfg.sim.n_cells},
                       {"dt", cfg.sim.dt},
                       {"t_end", cfg.sim.t_end},
                       {"scheme", to_string(cfg.sim.scheme)},
                       {"model", to_string(cfg.sim.model)},
                       {"transient_fraction", cfg.sim.transient_fraction},
                       {"probe_index", cfg.sim.probe_index},
                       {"sample_interval", cfg.sim.sample_interval},
                       {"initial", init}};
    }

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        r.require_object(s, "sweep");
        r.only_keys(s, "sweep", {"axis", "values", "from", "to", "count"});
        SweepSpec sw;
        if (!s.contains("axis")) r.fail("sweep.axis", "missing");
        const std::string axis = r.string(s["axis"], "sweep.axis");
        if (axis == "b") sw.axis = SweepAxis::b;
        else if (axis == "ell") sw.axis = SweepAxis::ell;
        else if (axis == "beta") sw.axis = SweepAxis::beta;
        else if (axis == "c") sw.axis = SweepAxis::c;
        else r.fail("sweep.axis", "expected one of b, ell, beta, c");
        const bool has_list = s.contains("values");
        const bool has_range = s.contains("from") || s.contains("to") || s.contains("count");
        if (has_list == has_range) r.fail("sweep.values", "give either values or from/to/count");
        if (has_list) {
            if (!s["values"].is_array()) r.fail("sweep.values", "expected an array");
            for (std::size_t i = 0; i < s["values"].size(); ++i) {
                sw.values.push_back(r.positive(s["values"][i], "sweep.values"));
            }
        } else {
            for (const char* k : {"from", "to", "count"}) {
                if (!s.contains(k)) r.fail(std::string("sweep.") + k, "missing");
            }
            const double from = r.positive(s["from"], "sweep.from");
            const double to = r.positive(s["to"], "sweep.to");
            const long long count = r.integer(s["count"], "sweep.count");
            if (count < 0) r.fail("sweep.count", "must be nonnegative");
            for (long long i = 0; i < count; ++i) {
                const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
                sw.values.push_back(from + t * (to - from));
            }
        }
        if (sw.values.empty()) r.fail("sweep.values", "empty range");
        cfg.sweep = sw;
        if (command == Command::sweep) echo["sweep"] = {{"axis", to_string(sw.axis)}, {"values", sw.values}};
    }
    if (command == Command::sweep && !cfg.sweep) r.fail("sweep", "missing for the sweep command");

    cfg.echo = std::move(echo);
    return cfg;
}

RunConfig load_config(Command command, const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", "--config");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError(std::string("malformed JSON: ") + e.what(), {}, line);
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_config(command, doc, text);
}

InitialCondition make_initial_condition(const InitialSpec& spec, const ModelParams& params, std::uint64_t seed) {
    InitialCondition ic;
    if (spec.type == "fig1") ic = InitialCondition::fig1();
    else if (spec.type == "fig2") ic = InitialCondition::fig2();
    else if (spec.type == "custom") {
        const std::map<std::string, double> consts = {{"ell", params.ell}, {"L", params.ell * std::numbers::pi}};
        const Expression u = Expression::parse(spec.u_expr, consts);
        const Expression v = Expression::parse(spec.v_expr, consts);
        ic = InitialCondition::custom(u, v);
    } else {
        ic = InitialCondition::constant(spec.level);
    }
    ic.noise = spec.noise;
    ic.seed = seed;
    return ic;
}

}  // namespace nlhopf
