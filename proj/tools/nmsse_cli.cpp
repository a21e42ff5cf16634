// nmsse: command-line driver.
//
//   nmsse [--mode exact|master|sse] [--unraveling ...] [--variant ...] [flags]
//   nmsse reproduce-figures [--output-dir DIR] [flags]
//
// Errors go to stderr as one JSON line: {"error": kind, "field": ..., "message": ...}.

#include "nmsse/config.hpp"
#include "nmsse/csv.hpp"
#include "nmsse/ensemble.hpp"

#include <json.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace nmsse;
using nlohmann::json;

int fail(const std::string& kind, const std::string& message, const std::string& field = "") {
    json line{{"error", kind}, {"message", message}};
    if (!field.empty()) line["field"] = field;
    std::cerr << line.dump() << '\n';
    return kind == "config" ? 2 : 1;
}

// "run.csv" -> "run.trajectory.csv"
std::string trajectory_path(const std::string& path) {
    std::filesystem::path p(path);
    const auto ext = p.extension().string();
    p.replace_extension();
    return p.string() + ".trajectory" + (ext.empty() ? std::string(".csv") : ext);
}

std::vector<BlochVector> oracle_curve(const ScenarioConfig& c, const TimeGrid& grid) {
    if (is_markov(c.unraveling)) return lindblad_bloch(*c.gamma, grid);
    return exact_bloch(c.g, c.delta, grid);
}

int run_sse(const ScenarioConfig& c) {
    const Scenario scenario(c.params());
    if (c.emit != EmitKind::ensemble) {
        const auto path = c.emit == EmitKind::both ? trajectory_path(c.output_path) : c.output_path;
        emit_csv(run_trajectory(scenario, c.master_seed, 0), path);
    }
    if (c.emit == EmitKind::trajectory) return 0;

    const EnsembleResult result = run_ensemble(scenario, c.n_traj, c.master_seed, {c.threads});
    emit_csv(result, c.output_path);
    if (!c.tolerance) return 0;

    const auto report = compare(result, result.grid, oracle_curve(c, result.grid), *c.tolerance);
    json summary{{"comparison", report.passed ? "pass" : "fail"},
                 {"max_abs", {report.max_abs[0], report.max_abs[1], report.max_abs[2]}},
                 {"tolerance", report.tolerance},
                 {"inside_3se_fraction", report.min_inside_fraction()},
                 {"config_hash", result.config_hash}};
    std::cerr << summary.dump() << '\n';
    if (!report.passed)
        return fail("comparison", "max-abs deviation " + format_number(report.max_deviation()) + " exceeds tolerance " +
                                      format_number(report.tolerance));
    return 0;
}

int run_config(const ScenarioConfig& c) {
    const TimeGrid grid = TimeGrid::covering(c.dt, c.t_final);
    switch (c.mode) {
    case RunMode::exact: emit_csv(grid, exact_bloch(c.g, c.delta, grid), c.output_path); return 0;
    case RunMode::master: emit_csv(grid, lindblad_bloch(*c.gamma, grid), c.output_path); return 0;
    case RunMode::sse: return run_sse(c);
    }
    return 0;
}

int reproduce_figures(const FiguresConfig& f) {
    namespace fs = std::filesystem;
    fs::create_directories(f.output_dir);
    const auto out = [&](const char* name) { return (fs::path(f.output_dir) / name).string(); };
    const auto note = [](const std::string& what) { std::cerr << "reproduce-figures: " << what << '\n'; };

    ScenarioParams base;
    base.delta = f.delta;
    base.dt = f.dt;
    base.t_final = f.t_final;
    const TimeGrid grid = TimeGrid::covering(f.dt, f.t_final);
    const auto exact = exact_bloch(base.g, base.delta, grid);
    emit_csv(grid, exact, out("fig1_exact.csv"));
    emit_csv(grid, exact, out("fig3_exact.csv"));

    struct Curve {
        const char* file;
        Unraveling unraveling;
        Variant variant;
    };
    const Curve curves[] = {{"fig1_coherent_linear.csv", Unraveling::coherent, Variant::linear},
                            {"fig1_coherent_actual.csv", Unraveling::coherent, Variant::actual},
                            {"fig3_quadrature_linear.csv", Unraveling::quadrature, Variant::linear},
                            {"fig3_quadrature_actual.csv", Unraveling::quadrature, Variant::actual}};
    for (const auto& curve : curves) {
        ScenarioParams p = base;
        p.unraveling = curve.unraveling;
        p.variant = curve.variant;
        note(std::string(curve.file) + " (" + std::to_string(f.n_traj) + " trajectories)");
        emit_csv(run_ensemble(Scenario(p), f.n_traj, f.master_seed, {f.threads}), out(curve.file));
    }

    for (const auto& [file, unraveling] : {std::pair{"fig2_coherent_trajectory.csv", Unraveling::coherent},
                                           std::pair{"fig2_quadrature_trajectory.csv", Unraveling::quadrature}}) {
        ScenarioParams p = base;
        p.unraveling = unraveling;
        p.variant = Variant::actual;
        note(file);
        emit_csv(run_trajectory(Scenario(p), f.master_seed, 0), out(file));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty() && args.front() == "reproduce-figures")
            return reproduce_figures(parse_figures_config({args.begin() + 1, args.end()}));
        return run_config(parse_config(args));
    } catch (const HelpRequested& h) {
        std::cout << h.what();
        return 0;
    } catch (const ConfigError& e) {
        return fail("config", e.what(), e.field());
    } catch (const EnsembleError& e) {
        return fail("trajectory", e.what());
    } catch (const DivergenceError& e) {
        return fail("divergence", e.what());
    } catch (const std::exception& e) {
        return fail("runtime", e.what());
    }
}
