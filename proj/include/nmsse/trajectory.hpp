#pragma once

#include "nmsse/ansatz.hpp"
#include "nmsse/bath.hpp"
#include "nmsse/models.hpp"
#include "nmsse/sse.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace nmsse {

// How the actual-mode noise shift is evaluated. `accumulated` carries the
// shifted mode amplitudes forward step by step (O(modes) per step);
// `direct` re-sums the whole expectation history through girsanov_shift
// (O(n) per step) and is kept as the reference form.
enum class GirsanovEvaluation { accumulated, direct };

// Integration scheme for Markov-limit runs.
enum class MarkovScheme { ito_euler, stratonovich_midpoint };

// Physical and numerical parameters of a run. Times and rates are in units of
// the coupling g (g = 1 unless a test sets otherwise).
struct ScenarioParams {
    Unraveling unraveling = Unraveling::coherent;
    Variant variant = Variant::actual;
    double g = 1.0;
    double delta = 2.0;
    double gamma = 0.0;  // Markov unravelings only
    double dt = 1e-4;
    double t_final = 3.0;
    GirsanovEvaluation girsanov = GirsanovEvaluation::accumulated;
    MarkovScheme markov_scheme = MarkovScheme::ito_euler;
};

// Immutable run setup shared by all trajectories: grid, system model, bath,
// phase table and closure F. The initial state is the first basis state
// (|e> for the two-level atom) with the bath in vacuum.
class Scenario {
public:
    // Two-level atom; non-Markovian unravelings use the two-mode bath at +/-delta.
    explicit Scenario(const ScenarioParams& params);

    // Markov unravelings only: arbitrary system model.
    Scenario(const ScenarioParams& params, SystemModel model);

    const ScenarioParams& params() const noexcept { return params_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    const SystemModel& model() const noexcept { return model_; }
    const SystemState& initial_state() const noexcept { return initial_; }

    // Non-Markovian scenarios only.
    const BathConfig& bath() const;
    const AnsatzSolution& ansatz() const;
    const PhaseTable& phases() const;

private:
    void validate() const;

    ScenarioParams params_;
    TimeGrid grid_;
    SystemModel model_;
    SystemState initial_;
    std::optional<BathConfig> bath_;
    std::shared_ptr<const AnsatzSolution> ansatz_;
    std::shared_ptr<const PhaseTable> phases_;
};

// Receives the state at every grid point of a trajectory.
class TrajectoryObserver {
public:
    virtual ~TrajectoryObserver() = default;
    virtual void on_point(std::size_t index, const SystemState& psi) = 0;
};

// A failure inside one trajectory, tagged with its index.
class TrajectoryError : public Error {
public:
    TrajectoryError(std::uint64_t index, const std::string& what);
    std::uint64_t index() const noexcept { return index_; }

private:
    std::uint64_t index_;
};

// Runs trajectory `index` of a run seeded with `master_seed`, reporting every
// grid point to the observer. Bitwise deterministic in (scenario, seed, index).
void simulate_trajectory(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t index,
                         TrajectoryObserver& observer);

struct TrajectoryRecord {
    TimeGrid grid;
    std::vector<BlochVector> bloch;  // raw state: `norm` is the squared norm |psi|^2
    Unraveling unraveling;
    Variant variant;
    std::uint64_t seed;
    std::uint64_t index;
};

TrajectoryRecord run_trajectory(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t index);

}  // namespace nmsse
