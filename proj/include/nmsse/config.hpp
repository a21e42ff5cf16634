#pragma once

#include "nmsse/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nmsse {

enum class RunMode { exact, master, sse };
enum class EmitKind { ensemble, trajectory, both };

const char* to_string(RunMode m) noexcept;
const char* to_string(EmitKind e) noexcept;

struct ScenarioConfig {
    RunMode mode = RunMode::sse;
    Unraveling unraveling = Unraveling::coherent;
    Variant variant = Variant::actual;
    double g = 1.0;
    double delta = 2.0;
    std::optional<double> gamma;
    double dt = 1e-4;
    double t_final = 3.0;
    std::uint64_t n_traj = 1000;
    std::uint64_t master_seed = 0;
    std::string output_path = "-";  // "-" writes to stdout
    EmitKind emit = EmitKind::ensemble;
    unsigned threads = 0;  // 0 = hardware concurrency
    // When set, the run is compared against its oracle and fails if the
    // max-abs Bloch deviation exceeds this value.
    std::optional<double> tolerance;

    ScenarioParams params() const;
};

// Invalid configuration; `field` names the offending key ("gamma", "dt", ...).
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// --help was requested; what() holds the usage text.
class HelpRequested : public Error {
public:
    using Error::Error;
};

// Parses command-line arguments (program name excluded). A flat key=value
// config file may be given with --config or as `config_file`; keys are the
// long flag names and flags override file values.
ScenarioConfig parse_config(const std::vector<std::string>& args,
                            const std::optional<std::string>& config_file = std::nullopt);

// Checks ranges and combinations; throws ConfigError.
void validate(const ScenarioConfig& config);

struct FiguresConfig {
    std::string output_dir = "figures";
    double delta = 2.0;
    double dt = 1e-4;
    double t_final = 3.0;
    std::uint64_t n_traj = 1000;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;
};

// Arguments following the `reproduce-figures` command.
FiguresConfig parse_figures_config(const std::vector<std::string>& args);

// Worker count from NMSSE_THREADS, or 0 when unset.
unsigned threads_from_environment();

}  // namespace nmsse
