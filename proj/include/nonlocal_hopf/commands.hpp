#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "nonlocal_hopf/config.hpp"
#include "nonlocal_hopf/report.hpp"

namespace nlhopf {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_config = 2,
    exit_no_hopf = 3,
    exit_blow_up = 4,
    exit_degenerate = 5,
};

/// A failure with a structured payload for standard error.
class CommandError : public Error {
public:
    CommandError(int code, std::string kind, const std::string& what, ojson detail = ojson::object())
        : Error(what), code_(code), kind_(std::move(kind)), detail_(std::move(detail)) {}
    int code() const noexcept { return code_; }
    const std::string& kind() const noexcept { return kind_; }
    const ojson& detail() const noexcept { return detail_; }

private:
    int code_;
    std::string kind_;
    ojson detail_;
};

struct CommandResult {
    ojson report;
    std::vector<std::string> files;  // written, relative to the output directory
};

CommandResult cmd_analyze(const RunConfig& cfg);
CommandResult cmd_hopf(const RunConfig& cfg);
CommandResult cmd_normalform(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);

CommandResult run_command(const RunConfig& cfg);

/// Maps any exception to an exit code and a machine-readable error object.
int error_to_exit(const std::exception& e, ojson& error_object);

/// Worker count: NONLOCAL_HOPF_THREADS if set and positive, else the
/// hardware concurrency, capped by `jobs`.
int worker_count(std::size_t jobs);

/// Runs fn(i) for i in [0, n) on a pool of worker_count(n) threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Gnuplot script drawing the u and v space-time surfaces from `csv_name`.
std::string plot_script(const std::string& csv_name, const ModelParams& params);

}  // namespace nlhopf
