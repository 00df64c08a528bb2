#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonlocal_hopf/errors.hpp"
#include "nonlocal_hopf/model.hpp"
#include "nonlocal_hopf/pde_sim.hpp"

namespace nlhopf {

enum class Command { analyze, hopf, normalform, simulate, sweep };

std::string to_string(Command c);
std::optional<Command> command_from_string(const std::string& s);

/// Schema violation.  `key` is a dotted path, `line` is 1-based when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0)
        : Error(what), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

enum class SweepAxis { b, ell, beta, c };
std::string to_string(SweepAxis a);

struct SweepSpec {
    SweepAxis axis = SweepAxis::b;
    std::vector<double> values;
};

struct InitialSpec {
    std::string type = "constant";  // constant | fig1 | fig2 | custom
    std::optional<double> level;
    std::string u_expr, v_expr;
    double noise = 0.0;
};

struct RunConfig {
    Command command = Command::analyze;
    ModelParams params;
    std::optional<RawParams> raw;  // set when the file gave raw_params
    SimConfig sim;
    InitialSpec initial;
    std::optional<SweepSpec> sweep;
    int analyze_grid = 400;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    /// The validated document with defaults filled in, for echoing.
    nlohmann::ordered_json echo;
};

/// Applies `key=value` with a dotted key.  The value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates a document.  `source` is the original text, used to attach
/// line numbers to key errors.
RunConfig parse_config(Command command, const nlohmann::json& doc, const std::string& source = {});

RunConfig load_config(Command command, const std::string& path, const std::vector<std::string>& overrides);

/// Builds the pde-sim initial condition, compiling custom expressions with
/// the constants ell and L = ell*pi.
InitialCondition make_initial_condition(const InitialSpec& spec, const ModelParams& params, std::uint64_t seed);

}  // namespace nlhopf
