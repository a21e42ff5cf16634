#include "nmsse/config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>

namespace nmsse {

namespace {

double parse_real(const std::string& field, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
        throw ConfigError(field, "expected a finite number, got '" + text + "'");
    return v;
}

std::uint64_t parse_count(const std::string& field, const std::string& text) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end)
        throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
    return v;
}

unsigned parse_threads(const std::string& field, const std::string& text) {
    const auto v = parse_count(field, text);
    if (v > 4096) throw ConfigError(field, "at most 4096 workers are supported");
    return static_cast<unsigned>(v);
}

template <class E>
E parse_enum(const std::string& field, const std::string& text, const std::map<std::string, E>& values) {
    const auto it = values.find(text);
    if (it != values.end()) return it->second;
    std::string allowed;
    for (const auto& [name, _] : values) allowed += (allowed.empty() ? "" : "|") + name;
    throw ConfigError(field, "expected one of " + allowed + ", got '" + text + "'");
}

// String-valued options keyed by field name; conversion happens after
// parsing so that every error names its field.
class RawOptions {
public:
    explicit RawOptions(CLI::App& app) : app_(app) {}

    void add(const std::string& field, const std::string& help) {
        auto& slot = values_[field];
        options_[field] = app_.add_option("--" + field, slot, help);
    }

    const std::string* get(const std::string& field) const {
        return options_.at(field)->count() > 0 ? &values_.at(field) : nullptr;
    }

private:
    CLI::App& app_;
    std::map<std::string, std::string> values_;
    std::map<std::string, CLI::Option*> options_;
};

void run_parser(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError("arguments", e.what());
    }
    const auto extras = app.remaining();
    if (!extras.empty()) {
        std::string name = extras.front();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        throw ConfigError(name, "unknown option '" + extras.front() + "'");
    }
}

const std::map<std::string, RunMode> kModes{{"exact", RunMode::exact}, {"master", RunMode::master}, {"sse", RunMode::sse}};
const std::map<std::string, Unraveling> kUnravelings{{"coherent", Unraveling::coherent},
                                                     {"quadrature", Unraveling::quadrature},
                                                     {"heterodyne", Unraveling::heterodyne},
                                                     {"homodyne", Unraveling::homodyne}};
const std::map<std::string, Variant> kVariants{{"linear", Variant::linear}, {"actual", Variant::actual}};
const std::map<std::string, EmitKind> kEmits{
    {"ensemble", EmitKind::ensemble}, {"trajectory", EmitKind::trajectory}, {"both", EmitKind::both}};

}  // namespace

const char* to_string(RunMode m) noexcept {
    switch (m) {
    case RunMode::exact: return "exact";
    case RunMode::master: return "master";
    case RunMode::sse: return "sse";
    }
    return "?";
}

const char* to_string(EmitKind e) noexcept {
    switch (e) {
    case EmitKind::ensemble: return "ensemble";
    case EmitKind::trajectory: return "trajectory";
    case EmitKind::both: return "both";
    }
    return "?";
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field)) {}

ScenarioParams ScenarioConfig::params() const {
    ScenarioParams p;
    p.unraveling = unraveling;
    p.variant = variant;
    p.g = g;
    p.delta = delta;
    p.gamma = gamma.value_or(0.0);
    p.dt = dt;
    p.t_final = t_final;
    return p;
}

unsigned threads_from_environment() {
    const char* env = std::getenv("NMSSE_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    return parse_threads("NMSSE_THREADS", env);
}

ScenarioConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_file) {
    CLI::App app("Non-Markovian stochastic Schrodinger equation engine", "nmsse");
    app.allow_extras();
    app.allow_config_extras(CLI::config_extras_mode::capture);
    app.set_config("--config", config_file.value_or(""), "flat key=value file; flags override its values");

    RawOptions raw(app);
    raw.add("mode", "exact | master | sse (default sse)");
    raw.add("unraveling", "coherent | quadrature | heterodyne | homodyne (default coherent)");
    raw.add("variant", "linear | actual (default actual)");
    raw.add("g", "coupling strength; sets the unit of time (default 1)");
    raw.add("delta", "bath detuning in units of g (default 2)");
    raw.add("gamma", "Markov decay rate; required for master, heterodyne and homodyne");
    raw.add("dt", "time step (default 1e-4)");
    raw.add("t-final", "final time (default 3)");
    raw.add("n-traj", "number of trajectories (default 1000)");
    raw.add("seed", "master seed (default 0)");
    raw.add("output", "output CSV path, '-' for stdout (default -)");
    raw.add("emit", "ensemble | trajectory | both (default ensemble)");
    raw.add("threads", "worker threads, 0 = all cores (default NMSSE_THREADS or 0)");
    raw.add("tolerance", "compare against the oracle and fail above this max-abs deviation");

    run_parser(app, args);

    ScenarioConfig c;
    c.threads = threads_from_environment();
    if (auto* v = raw.get("mode")) c.mode = parse_enum("mode", *v, kModes);
    if (auto* v = raw.get("unraveling")) c.unraveling = parse_enum("unraveling", *v, kUnravelings);
    if (auto* v = raw.get("variant")) c.variant = parse_enum("variant", *v, kVariants);
    if (auto* v = raw.get("g")) c.g = parse_real("g", *v);
    if (auto* v = raw.get("delta")) c.delta = parse_real("delta", *v);
    if (auto* v = raw.get("gamma")) c.gamma = parse_real("gamma", *v);
    if (auto* v = raw.get("dt")) c.dt = parse_real("dt", *v);
    if (auto* v = raw.get("t-final")) c.t_final = parse_real("t-final", *v);
    if (auto* v = raw.get("n-traj")) c.n_traj = parse_count("n-traj", *v);
    if (auto* v = raw.get("seed")) c.master_seed = parse_count("seed", *v);
    if (auto* v = raw.get("output")) c.output_path = *v;
    if (auto* v = raw.get("emit")) c.emit = parse_enum("emit", *v, kEmits);
    if (auto* v = raw.get("threads")) c.threads = parse_threads("threads", *v);
    if (auto* v = raw.get("tolerance")) c.tolerance = parse_real("tolerance", *v);

    if (c.mode != RunMode::sse) {
        for (const char* field : {"unraveling", "variant", "n-traj", "seed", "emit", "tolerance"})
            if (raw.get(field))
                throw ConfigError(field, std::string("not applicable with mode=") + to_string(c.mode));
    }
    if (raw.get("delta") && (c.mode == RunMode::master || (c.mode == RunMode::sse && is_markov(c.unraveling))))
        throw ConfigError("delta", "applies to the two-mode bath only, not to Markov runs");
    if (raw.get("gamma") && (c.mode == RunMode::exact || (c.mode == RunMode::sse && !is_markov(c.unraveling))))
        throw ConfigError("gamma", "applies to Markov runs only (mode=master, heterodyne, homodyne)");
    if (c.tolerance && c.emit == EmitKind::trajectory)
        throw ConfigError("tolerance", "comparison needs an ensemble; use emit=ensemble or emit=both");
    validate(c);
    return c;
}

void validate(const ScenarioConfig& c) {
    if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (!(c.t_final >= c.dt)) throw ConfigError("t-final", "must be at least dt");
    if (c.t_final / c.dt > 1e9) throw ConfigError("dt", "more than 1e9 steps requested");
    if (c.n_traj < 1) throw ConfigError("n-traj", "must be at least 1");
    if (!(c.g >= 0.0)) throw ConfigError("g", "must be non-negative");
    if (c.tolerance && !(*c.tolerance >= 0.0)) throw ConfigError("tolerance", "must be non-negative");
    const bool markov = c.mode == RunMode::master || (c.mode == RunMode::sse && is_markov(c.unraveling));
    if (markov) {
        if (!c.gamma) throw ConfigError("gamma", "required for Markov runs (mode=master, heterodyne, homodyne)");
        if (!(*c.gamma > 0.0)) throw ConfigError("gamma", "must be positive");
    }
    if (c.output_path.empty()) throw ConfigError("output", "must not be empty");
    if (c.emit == EmitKind::both && c.output_path == "-")
        throw ConfigError("output", "emit=both writes two files and needs a file path");
}

FiguresConfig parse_figures_config(const std::vector<std::string>& args) {
    CLI::App app("Writes the CSV curves of the three benchmark figures", "nmsse reproduce-figures");
    app.allow_extras();
    RawOptions raw(app);
    raw.add("output-dir", "directory for the CSV files (default figures)");
    raw.add("delta", "bath detuning in units of g (default 2)");
    raw.add("dt", "time step (default 1e-4)");
    raw.add("t-final", "final time (default 3)");
    raw.add("n-traj", "trajectories per ensemble (default 1000)");
    raw.add("seed", "master seed (default 0)");
    raw.add("threads", "worker threads, 0 = all cores (default NMSSE_THREADS or 0)");
    run_parser(app, args);

    FiguresConfig f;
    f.threads = threads_from_environment();
    if (auto* v = raw.get("output-dir")) f.output_dir = *v;
    if (auto* v = raw.get("delta")) f.delta = parse_real("delta", *v);
    if (auto* v = raw.get("dt")) f.dt = parse_real("dt", *v);
    if (auto* v = raw.get("t-final")) f.t_final = parse_real("t-final", *v);
    if (auto* v = raw.get("n-traj")) f.n_traj = parse_count("n-traj", *v);
    if (auto* v = raw.get("seed")) f.master_seed = parse_count("seed", *v);
    if (auto* v = raw.get("threads")) f.threads = parse_threads("threads", *v);

    if (!(f.dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (!(f.t_final >= f.dt)) throw ConfigError("t-final", "must be at least dt");
    if (f.n_traj < 1) throw ConfigError("n-traj", "must be at least 1");
    if (f.output_dir.empty()) throw ConfigError("output-dir", "must not be empty");
    return f;
}

}  // namespace nmsse
