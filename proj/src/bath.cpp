#include "nmsse/bath.hpp"

#include <cmath>
#include <string>

namespace nmsse {

namespace {

void validate_modes(const std::vector<BathMode>& modes, bool symmetric) {
    if (modes.empty()) throw std::invalid_argument("bath: at least one mode is required");
    for (const auto& m : modes) {
        if (!(m.coupling >= 0.0) || !std::isfinite(m.coupling))
            throw std::invalid_argument("bath: couplings must be finite and non-negative");
        if (!std::isfinite(m.detuning)) throw std::invalid_argument("bath: detunings must be finite");
    }
    if (!symmetric) return;
    if (modes.size() % 2 != 0) throw std::invalid_argument("bath: symmetric bath needs an even mode count");
    double previous = 0.0;
    for (std::size_t p = 0; p < modes.size() / 2; ++p) {
        const auto& plus = modes[2 * p];
        const auto& minus = modes[2 * p + 1];
        if (plus.detuning < 0.0 || minus.detuning != -plus.detuning || minus.coupling != plus.coupling)
            throw std::invalid_argument("bath: symmetric pairs must be stored as (+k, -k) with equal couplings");
        if (plus.detuning < previous)
            throw std::invalid_argument("bath: symmetric pairs must be ordered by ascending |detuning|");
        previous = plus.detuning;
    }
}

void require_grid_match(const TimeGrid& grid, std::size_t history, std::size_t t_index, std::size_t needed) {
    if (t_index >= grid.size()) throw std::out_of_range("girsanov shift: index beyond the noise grid");
    if (history < needed)
        throw std::invalid_argument("girsanov shift: history has " + std::to_string(history) +
                                    " entries, index " + std::to_string(t_index) + " needs " +
                                    std::to_string(needed));
}

}  // namespace

BathConfig::BathConfig(std::vector<BathMode> modes, bool symmetric_pairs)
    : modes_(std::move(modes)), symmetric_(symmetric_pairs) {
    validate_modes(modes_, symmetric_);
}

BathConfig BathConfig::two_mode(double g, double delta) {
    return symmetric({BathMode{g, std::abs(delta)}});
}

BathConfig BathConfig::symmetric(std::vector<BathMode> positive_modes) {
    std::vector<BathMode> modes;
    modes.reserve(2 * positive_modes.size());
    for (const auto& m : positive_modes) {
        modes.push_back(m);
        modes.push_back(BathMode{m.coupling, -m.detuning});
    }
    return BathConfig(std::move(modes), true);
}

PhaseTable::PhaseTable(const BathConfig& bath, const TimeGrid& grid)
    : grid_(grid), modes_(bath.size()), table_(grid.size() * bath.size()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        for (std::size_t k = 0; k < modes_; ++k) {
            const double angle = bath.modes()[k].detuning * t;
            table_[i * modes_ + k] = Complex(std::cos(angle), -std::sin(angle));
        }
    }
}

Complex memory_kernel(const BathConfig& bath, double tau) {
    Complex sum{0.0, 0.0};
    for (const auto& m : bath.modes()) {
        const double angle = m.detuning * tau;
        sum += m.coupling * m.coupling * Complex(std::cos(angle), -std::sin(angle));
    }
    return sum;
}

double symmetric_kernel(const BathConfig& bath, double tau) {
    if (!bath.symmetric_pairs()) throw std::invalid_argument("symmetric kernel: bath is not symmetric");
    double sum = 0.0;
    for (std::size_t p = 0; p < bath.pair_count(); ++p) {
        const auto& m = bath.positive_mode(p);
        sum += 2.0 * m.coupling * m.coupling * std::cos(m.detuning * tau);
    }
    return sum;
}

ModeSample sample_coherent(const BathConfig& bath, RandomStream& rng) {
    ModeSample sample;
    sample.amplitudes.reserve(bath.size());
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double re = rng.normal(0.5);
        const double im = rng.normal(0.5);
        sample.amplitudes.emplace_back(re, im);
    }
    return sample;
}

QuadSample sample_quadrature(const BathConfig& bath, RandomStream& rng) {
    if (!bath.symmetric_pairs())
        throw std::invalid_argument("quadrature sampling requires a bath of symmetric mode pairs");
    QuadSample sample;
    const auto pairs = bath.pair_count();
    sample.x_plus.reserve(pairs);
    sample.y_minus.reserve(pairs);
    for (std::size_t p = 0; p < pairs; ++p) sample.x_plus.push_back(rng.normal(0.5));
    for (std::size_t p = 0; p < pairs; ++p) sample.y_minus.push_back(rng.normal(0.5));
    return sample;
}

NoisePath synthesize_noise(const BathConfig& bath, const ModeSample& sample, const TimeGrid& grid) {
    return synthesize_noise(bath, sample, PhaseTable(bath, grid));
}

NoisePath synthesize_noise(const BathConfig& bath, const ModeSample& sample, const PhaseTable& phases) {
    if (sample.amplitudes.size() != bath.size())
        throw std::invalid_argument("coherent noise: sample size does not match the bath");
    if (phases.modes() != bath.size()) throw std::invalid_argument("coherent noise: phase table does not match the bath");
    const auto& grid = phases.grid();
    NoisePath path{grid, std::vector<Complex>(grid.size()), NoiseKind::coherent};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Complex z{0.0, 0.0};
        for (std::size_t k = 0; k < bath.size(); ++k)
            z += bath.modes()[k].coupling * sample.amplitudes[k] * phases.phase(k, i);
        path.values[i] = z;
    }
    return path;
}

NoisePath synthesize_noise(const BathConfig& bath, const QuadSample& sample, const TimeGrid& grid) {
    return synthesize_noise(bath, sample, PhaseTable(bath, grid));
}

NoisePath synthesize_noise(const BathConfig& bath, const QuadSample& sample, const PhaseTable& phases) {
    if (!bath.symmetric_pairs())
        throw std::invalid_argument("quadrature noise requires a bath of symmetric mode pairs");
    if (sample.x_plus.size() != bath.pair_count() || sample.y_minus.size() != bath.pair_count())
        throw std::invalid_argument("quadrature noise: sample size does not match the bath");
    if (phases.modes() != bath.size()) throw std::invalid_argument("quadrature noise: phase table does not match the bath");
    const auto& grid = phases.grid();
    NoisePath path{grid, std::vector<Complex>(grid.size()), NoiseKind::quadrature};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double z = 0.0;
        for (std::size_t p = 0; p < bath.pair_count(); ++p) {
            const double g = bath.positive_mode(p).coupling;
            z += 2.0 * g * (sample.x_plus[p] * phases.cos(2 * p, i) + sample.y_minus[p] * phases.sin(2 * p, i));
        }
        path.values[i] = Complex(z, 0.0);
    }
    return path;
}

NoisePath sample_markov_noise(double gamma, const TimeGrid& grid, NoiseKind kind, RandomStream& rng) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("markov noise: gamma must be non-negative");
    if (kind != NoiseKind::markov_complex && kind != NoiseKind::markov_real)
        throw std::invalid_argument("markov noise: kind must be markov_complex or markov_real");
    NoisePath path{grid, std::vector<Complex>(grid.size()), kind};
    const double scale = std::sqrt(gamma);
    const double dt = grid.dt();
    for (auto& v : path.values) {
        if (kind == NoiseKind::markov_complex) {
            const double re = rng.normal(0.5 / dt);
            const double im = rng.normal(0.5 / dt);
            v = Complex(scale * re, scale * im);
        } else {
            v = Complex(scale * rng.normal(1.0 / dt), 0.0);
        }
    }
    return path;
}

Complex girsanov_shift(const NoisePath& z_lambda, const ExpectationHistory& history, const BathConfig& bath,
                       std::size_t t_index) {
    const auto& grid = z_lambda.grid;
    require_grid_match(grid, history.size(), t_index, t_index);
    const double dt = grid.dt();
    const double t = grid.t(t_index);
    switch (z_lambda.kind) {
    case NoiseKind::coherent: {
        Complex conj_sum{0.0, 0.0};
        for (std::size_t j = 0; j < t_index; ++j)
            conj_sum += std::conj(memory_kernel(bath, t - grid.t(j))) * history[j] * dt;
        return z_lambda.values[t_index] + std::conj(conj_sum);
    }
    case NoiseKind::quadrature: {
        double sum = 0.0;
        for (std::size_t j = 0; j < t_index; ++j)
            sum += symmetric_kernel(bath, t - grid.t(j)) * history[j].real() * dt;
        return Complex(z_lambda.values[t_index].real() + sum, 0.0);
    }
    default:
        throw std::invalid_argument("girsanov shift: Markov noise needs the delta-kernel form");
    }
}

Complex girsanov_shift_markov(const NoisePath& z_lambda, const ExpectationHistory& history, double gamma,
                              std::size_t t_index) {
    require_grid_match(z_lambda.grid, history.size(), t_index, t_index + 1);
    const Complex h = history[t_index];
    switch (z_lambda.kind) {
    case NoiseKind::markov_complex:
        return z_lambda.values[t_index] + 0.5 * gamma * std::conj(h);
    case NoiseKind::markov_real:
        return Complex(z_lambda.values[t_index].real() + 0.5 * gamma * h.real(), 0.0);
    default:
        throw std::invalid_argument("girsanov shift: delta-kernel form needs Markov noise");
    }
}

}  // namespace nmsse
