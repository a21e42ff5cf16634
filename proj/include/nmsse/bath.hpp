#pragma once

#include "nmsse/common.hpp"
#include "nmsse/random.hpp"

#include <span>
#include <vector>

namespace nmsse {

// One bath mode in the interaction picture: coupling g_k >= 0 and detuning
// Omega_k = omega_k - omega_0 from the system frequency.
struct BathMode {
    double coupling = 0.0;
    double detuning = 0.0;
};

// Discrete bath. When `symmetric_pairs()` holds, modes are stored as adjacent
// (+k, -k) pairs with Omega_{-k} = -Omega_{+k}, equal couplings, Omega_{+k} >= 0
// and ascending |Omega|; only such baths admit the quadrature unraveling.
class BathConfig {
public:
    BathConfig(std::vector<BathMode> modes, bool symmetric_pairs);

    // The two-mode bath of the benchmark system: couplings g at detunings +/-delta.
    static BathConfig two_mode(double g, double delta);

    // Symmetric bath from the positive-k half; the -k partners are generated.
    static BathConfig symmetric(std::vector<BathMode> positive_modes);

    const std::vector<BathMode>& modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return modes_.size(); }
    std::size_t pair_count() const noexcept { return symmetric_ ? modes_.size() / 2 : 0; }
    bool symmetric_pairs() const noexcept { return symmetric_; }

    // The +k member of pair p (symmetric baths only).
    const BathMode& positive_mode(std::size_t pair) const { return modes_.at(2 * pair); }

private:
    std::vector<BathMode> modes_;
    bool symmetric_;
};

// Mode amplitudes a_k drawn from the vacuum (ostensible) distribution.
struct ModeSample {
    std::vector<Complex> amplitudes;
};

// Two-mode quadratures X_k^+ and Y_k^- per symmetric pair.
struct QuadSample {
    std::vector<double> x_plus;
    std::vector<double> y_minus;
};

enum class NoiseKind { coherent, quadrature, markov_complex, markov_real };

// A realized noise function on the run grid. Quadrature and markov_real paths
// have identically zero imaginary parts.
struct NoisePath {
    TimeGrid grid;
    std::vector<Complex> values;
    NoiseKind kind;
};

// Expectation values recorded along a trajectory, one per completed step:
// <L^dagger>_s for the coherent unraveling, the real <L_x>_s for quadrature.
class ExpectationHistory {
public:
    void append(Complex value) { values_.push_back(value); }
    void append_real(double value) { values_.emplace_back(value, 0.0); }
    std::size_t size() const noexcept { return values_.size(); }
    Complex operator[](std::size_t i) const { return values_[i]; }
    std::span<const Complex> values() const noexcept { return values_; }
    void reserve(std::size_t n) { values_.reserve(n); }

private:
    std::vector<Complex> values_;
};

// Cached phase factors exp(-i Omega_k t_i) for every mode and grid point.
// Both the direct noise synthesis and the trajectory runner read phases from
// here so they agree bitwise.
class PhaseTable {
public:
    PhaseTable(const BathConfig& bath, const TimeGrid& grid);

    Complex phase(std::size_t mode, std::size_t i) const { return table_[i * modes_ + mode]; }
    // cos(Omega_k t_i) and sin(Omega_k t_i), read off the stored phase.
    double cos(std::size_t mode, std::size_t i) const { return phase(mode, i).real(); }
    double sin(std::size_t mode, std::size_t i) const { return -phase(mode, i).imag(); }

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t modes() const noexcept { return modes_; }

private:
    TimeGrid grid_;
    std::size_t modes_;
    std::vector<Complex> table_;
};

// alpha(tau) = sum_k g_k^2 exp(-i Omega_k tau).
Complex memory_kernel(const BathConfig& bath, double tau);

// beta(tau) = 2 sum_{k>0} g_k^2 cos(Omega_k tau). Requires a symmetric bath.
double symmetric_kernel(const BathConfig& bath, double tau);

// Independent complex Gaussians with E|a|^2 = 1, E[a^2] = 0. Real then
// imaginary part, mode by mode.
ModeSample sample_coherent(const BathConfig& bath, RandomStream& rng);

// Independent real Gaussians of variance 1/2; all X_k^+ first, then all Y_k^-.
QuadSample sample_quadrature(const BathConfig& bath, RandomStream& rng);

// z(t_i) = sum_k g_k a_k exp(-i Omega_k t_i).
NoisePath synthesize_noise(const BathConfig& bath, const ModeSample& sample, const TimeGrid& grid);
NoisePath synthesize_noise(const BathConfig& bath, const ModeSample& sample, const PhaseTable& phases);

// z(t_i) = sum_{k>0} 2 g_k (X_k^+ cos(Omega_k t_i) + Y_k^- sin(Omega_k t_i)),
// evaluated in real arithmetic.
NoisePath synthesize_noise(const BathConfig& bath, const QuadSample& sample, const TimeGrid& grid);
NoisePath synthesize_noise(const BathConfig& bath, const QuadSample& sample, const PhaseTable& phases);

// White noise z(t_i) = sqrt(gamma) zeta(t_i) with E|zeta|^2 = 1/dt, one
// independent draw per grid point. gamma = 0 gives the zero path.
NoisePath sample_markov_noise(double gamma, const TimeGrid& grid, NoiseKind kind, RandomStream& rng);

// Girsanov-shifted (actual) noise at grid index t_index:
//   coherent:   z(t_i) = z_L(t_i) + conj( sum_{j<i} conj(alpha(t_i - t_j)) h_j dt ),  h = <L^dagger>
//   quadrature: z(t_i) = z_L(t_i) + sum_{j<i} beta(t_i - t_j) h_j dt,                h = <L_x>
// Left-endpoint rule on the run grid; the history must cover indices
// 0 .. t_index-1. This is the direct O(n) per call form.
Complex girsanov_shift(const NoisePath& z_lambda, const ExpectationHistory& history, const BathConfig& bath,
                       std::size_t t_index);

// Markov (delta-kernel) limit: the tau = 0 endpoint gets half weight, giving
//   z(t_i) = z_L(t_i) + (gamma/2) conj(h_i)    complex noise, h = <L^dagger>
//   z(t_i) = z_L(t_i) + (gamma/2) h_i          real noise,    h = <L_x>
// The history must include the current index.
Complex girsanov_shift_markov(const NoisePath& z_lambda, const ExpectationHistory& history, double gamma,
                              std::size_t t_index);

}  // namespace nmsse
