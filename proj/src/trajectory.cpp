#include "nmsse/trajectory.hpp"

#include <cmath>
#include <string>

namespace nmsse {

namespace {

SystemState first_basis_state(Eigen::Index d) {
    SystemState psi = SystemState::Zero(d);
    psi(0) = 1.0;
    return psi;
}

// Noise amplitudes of one non-Markovian trajectory, stored per mode in the
// form z(t_i) = sum_k c_k(t_i) g_k phase_k(t_i). In actual mode the
// coefficients absorb the Girsanov shift as it accumulates.
class ModeAccumulator {
public:
    ModeAccumulator(const BathConfig& bath, const PhaseTable& phases, double dt)
        : bath_(bath), phases_(phases), dt_(dt) {}

    void draw_coherent(RandomStream& rng) { coherent_ = sample_coherent(bath_, rng).amplitudes; }
    void draw_quadrature(RandomStream& rng) { quad_ = sample_quadrature(bath_, rng); }

    Complex coherent_noise(std::size_t i) const {
        Complex z{0.0, 0.0};
        for (std::size_t k = 0; k < bath_.size(); ++k)
            z += bath_.modes()[k].coupling * coherent_[k] * phases_.phase(k, i);
        return z;
    }

    double quadrature_noise(std::size_t i) const {
        double z = 0.0;
        for (std::size_t p = 0; p < bath_.pair_count(); ++p) {
            const double g = bath_.positive_mode(p).coupling;
            z += 2.0 * g * (quad_.x_plus[p] * phases_.cos(2 * p, i) + quad_.y_minus[p] * phases_.sin(2 * p, i));
        }
        return z;
    }

    // Adds the contribution of step i with expectation <L> (coherent).
    void shift_coherent(std::size_t i, Complex exp_l) {
        for (std::size_t k = 0; k < bath_.size(); ++k)
            coherent_[k] += bath_.modes()[k].coupling * dt_ * std::conj(phases_.phase(k, i)) * exp_l;
    }

    // Adds the contribution of step i with expectation <L_x> (quadrature).
    void shift_quadrature(std::size_t i, double exp_lx) {
        for (std::size_t p = 0; p < bath_.pair_count(); ++p) {
            const double w = bath_.positive_mode(p).coupling * dt_ * exp_lx;
            quad_.x_plus[p] += w * phases_.cos(2 * p, i);
            quad_.y_minus[p] += w * phases_.sin(2 * p, i);
        }
    }

private:
    const BathConfig& bath_;
    const PhaseTable& phases_;
    double dt_;
    std::vector<Complex> coherent_;
    QuadSample quad_;
};

void run_non_markov(const Scenario& sc, RandomStream& rng, TrajectoryObserver& observer) {
    const auto& p = sc.params();
    const auto& grid = sc.grid();
    const auto& f = sc.ansatz().f_total;
    const bool real_noise = uses_real_noise(p.unraveling);
    const bool actual = p.variant == Variant::actual;
    const bool direct = actual && p.girsanov == GirsanovEvaluation::direct;

    ModeAccumulator modes(sc.bath(), sc.phases(), grid.dt());
    if (real_noise)
        modes.draw_quadrature(rng);
    else
        modes.draw_coherent(rng);

    // The direct form needs the unshifted path and the expectation history.
    NoisePath z_lambda{grid, {}, real_noise ? NoiseKind::quadrature : NoiseKind::coherent};
    ExpectationHistory history;
    if (direct) {
        z_lambda.values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            z_lambda.values[i] = real_noise ? Complex(modes.quadrature_noise(i), 0.0) : modes.coherent_noise(i);
        history.reserve(grid.size());
    }

    SseStepper stepper(sc.model(), p.unraveling);
    SystemState psi = sc.initial_state();
    const double dt = grid.dt();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        observer.on_point(i, psi);
        if (i + 1 == grid.size()) break;

        Complex z;
        if (direct)
            z = girsanov_shift(z_lambda, history, sc.bath(), i);
        else
            z = real_noise ? Complex(modes.quadrature_noise(i), 0.0) : modes.coherent_noise(i);
        const Complex closure = real_noise ? Complex(f[i].real(), 0.0) : f[i];
        const Complex w = real_noise ? z : std::conj(z);

        if (!actual) {
            stepper.step_linear(psi, closure, w, dt);
        } else {
            const Expectations e = stepper.step_actual(psi, closure, w, dt);
            if (direct) {
                if (real_noise)
                    history.append_real(e.g.real());
                else
                    history.append(std::conj(e.l));
            } else if (real_noise) {
                modes.shift_quadrature(i, e.g.real());
            } else {
                modes.shift_coherent(i, e.l);
            }
        }
        if (!std::isfinite(psi.squaredNorm()))
            throw DivergenceError("trajectory: state became non-finite at t = " + std::to_string(grid.t(i + 1)));
    }
}

void run_markov(const Scenario& sc, RandomStream& rng, TrajectoryObserver& observer) {
    const auto& p = sc.params();
    const auto& grid = sc.grid();
    const bool real_noise = uses_real_noise(p.unraveling);
    const NoisePath z_lambda =
        sample_markov_noise(p.gamma, grid, real_noise ? NoiseKind::markov_real : NoiseKind::markov_complex, rng);
    ExpectationHistory history;
    history.reserve(grid.size());

    SseStepper stepper(sc.model(), p.unraveling);
    SystemState psi = sc.initial_state();
    const double dt = grid.dt();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        observer.on_point(i, psi);
        if (i + 1 == grid.size()) break;

        if (p.markov_scheme == MarkovScheme::stratonovich_midpoint) {
            stepper.step_markov_stratonovich(psi, p.gamma, z_lambda.values[i], dt);
        } else if (p.variant == Variant::linear) {
            stepper.step_markov(psi, p.gamma, z_lambda.values[i], dt, Variant::linear);
        } else {
            const Expectations e = stepper.expectations(psi);
            if (real_noise)
                history.append_real(e.g.real());
            else
                history.append(std::conj(e.l));
            const Complex z = girsanov_shift_markov(z_lambda, history, p.gamma, i);
            stepper.step_markov(psi, p.gamma, z, dt, Variant::actual);
        }
        if (!std::isfinite(psi.squaredNorm()))
            throw DivergenceError("trajectory: state became non-finite at t = " + std::to_string(grid.t(i + 1)));
    }
}

class RecordingObserver : public TrajectoryObserver {
public:
    explicit RecordingObserver(std::vector<BlochVector>& out) : out_(out) {}
    void on_point(std::size_t, const SystemState& psi) override { out_.push_back(bloch_from_state(psi)); }

private:
    std::vector<BlochVector>& out_;
};

}  // namespace

Scenario::Scenario(const ScenarioParams& params)
    : params_(params),
      grid_(TimeGrid::covering(params.dt, params.t_final)),
      model_(SystemModel::two_level_atom()),
      initial_(first_basis_state(2)) {
    validate();
    if (!is_markov(params_.unraveling)) {
        bath_.emplace(BathConfig::two_mode(params_.g, params_.delta));
        if (params_.unraveling == Unraveling::quadrature && !kernel_equivalence_check(*bath_, grid_))
            throw Error("scenario: the coherent and quadrature kernels differ; the shared closure is not valid");
        ansatz_ = std::make_shared<const AnsatzSolution>(solve_ansatz(params_.g, params_.delta, grid_));
        phases_ = std::make_shared<const PhaseTable>(*bath_, grid_);
    }
}

Scenario::Scenario(const ScenarioParams& params, SystemModel model)
    : params_(params),
      grid_(TimeGrid::covering(params.dt, params.t_final)),
      model_(std::move(model)),
      initial_(first_basis_state(model_.dimension())) {
    if (!is_markov(params_.unraveling))
        throw std::invalid_argument("scenario: custom system models are supported for Markov unravelings only");
    validate();
}

void Scenario::validate() const {
    const auto& p = params_;
    if (is_markov(p.unraveling)) {
        if (!std::isfinite(p.gamma) || p.gamma < 0.0)
            throw std::invalid_argument("scenario: gamma must be finite and non-negative");
        if (p.markov_scheme == MarkovScheme::stratonovich_midpoint &&
            (p.unraveling != Unraveling::heterodyne || p.variant != Variant::linear))
            throw std::invalid_argument("scenario: the Stratonovich scheme is available for linear heterodyne only");
    } else {
        if (!std::isfinite(p.g) || p.g < 0.0) throw std::invalid_argument("scenario: g must be finite and non-negative");
        if (!std::isfinite(p.delta)) throw std::invalid_argument("scenario: delta must be finite");
        if (p.markov_scheme != MarkovScheme::ito_euler)
            throw std::invalid_argument("scenario: the Stratonovich scheme applies to Markov unravelings only");
    }
}

const BathConfig& Scenario::bath() const {
    if (!bath_) throw std::logic_error("scenario: Markov scenarios have no discrete bath");
    return *bath_;
}

const AnsatzSolution& Scenario::ansatz() const {
    if (!ansatz_) throw std::logic_error("scenario: Markov scenarios have no closure");
    return *ansatz_;
}

const PhaseTable& Scenario::phases() const {
    if (!phases_) throw std::logic_error("scenario: Markov scenarios have no phase table");
    return *phases_;
}

TrajectoryError::TrajectoryError(std::uint64_t index, const std::string& what)
    : Error("trajectory " + std::to_string(index) + ": " + what), index_(index) {}

void simulate_trajectory(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t index,
                         TrajectoryObserver& observer) {
    RandomStream rng = RandomStream::for_trajectory(master_seed, index);
    try {
        if (is_markov(scenario.params().unraveling))
            run_markov(scenario, rng, observer);
        else
            run_non_markov(scenario, rng, observer);
    } catch (const TrajectoryError&) {
        throw;
    } catch (const std::exception& e) {
        throw TrajectoryError(index, e.what());
    }
}

TrajectoryRecord run_trajectory(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t index) {
    if (scenario.model().dimension() != 2)
        throw std::invalid_argument("run_trajectory: Bloch records need a two-level system");
    TrajectoryRecord rec{scenario.grid(), {}, scenario.params().unraveling, scenario.params().variant, master_seed,
                         index};
    rec.bloch.reserve(scenario.grid().size());
    RecordingObserver obs(rec.bloch);
    simulate_trajectory(scenario, master_seed, index, obs);
    return rec;
}

}  // namespace nmsse
