#pragma once

#include "nmsse/common.hpp"
#include "nmsse/models.hpp"

namespace nmsse {

// Bath measurement basis. coherent/quadrature are the non-Markovian
// unravelings; heterodyne/homodyne are their Markov limits.
enum class Unraveling { coherent, quadrature, heterodyne, homodyne };

// linear: ostensible-measure noise, unnormalized state.
// actual: Girsanov-shifted noise, normalized nonlinear equation.
enum class Variant { linear, actual };

const char* to_string(Unraveling u) noexcept;
const char* to_string(Variant v) noexcept;

// True for quadrature and homodyne, whose noise is real and whose closure
// operator is L_x = L + L^dagger instead of L^dagger.
constexpr bool uses_real_noise(Unraveling u) noexcept {
    return u == Unraveling::quadrature || u == Unraveling::homodyne;
}
constexpr bool is_markov(Unraveling u) noexcept {
    return u == Unraveling::heterodyne || u == Unraveling::homodyne;
}

// Expectation values in the normalized state: <L>, <G>, <G L> where G is
// L^dagger (complex noise) or L_x (real noise).
struct Expectations {
    Complex l;
    Complex g;
    Complex gl;
    double norm_squared;
};

// Explicit Euler steppers for one system model and unraveling. Operator
// products are formed once at construction and every step works in
// preallocated buffers; an instance is not thread-safe, but is cheap to copy.
//
// Non-Markovian drift with closure F(t) and noise coefficient w (w = z* for
// complex noise, w = z for real noise):
//   linear: -iH + w L - F G L
//   actual: -iH + w (L - <L>) - F (G - <G>) L + F <(G - <G>) L>
// Markov (Ito) drifts, w as above:
//   linear:              -iH + w L - gamma/2 L^dagger L
//   actual heterodyne:   -iH + w (L - <L>) - gamma/2 (L^dagger L - <L^dagger> L)
//   actual homodyne:     -iH + w (L - <L>) - gamma/2 (L^dagger L - <L^dagger> L + <L> L - <L>^2)
// For actual Markov steps w already contains the (gamma/2) shift.
class SseStepper {
public:
    SseStepper(const SystemModel& model, Unraveling unraveling);

    Unraveling unraveling() const noexcept { return unraveling_; }

    // Expectations of the current state (normalized by its squared norm).
    Expectations expectations(const SystemState& psi) const;

    void step_linear(SystemState& psi, Complex closure, Complex noise_coeff, double dt);

    // Returns the expectations of the state at the start of the step.
    Expectations step_actual(SystemState& psi, Complex closure, Complex noise_coeff, double dt);

    // `z` is the noise function value; heterodyne conjugates it.
    Expectations step_markov(SystemState& psi, double gamma, Complex z, double dt, Variant variant);

    // Explicit midpoint step of the Stratonovich linear heterodyne equation
    //   dpsi/dt = (-iH + z* L - gamma/2 L^dagger L) psi
    // with the noise frozen over the step.
    void step_markov_stratonovich(SystemState& psi, double gamma, Complex z, double dt);

private:
    Complex noise_coefficient(Complex z) const;
    void linear_markov_rhs(const SystemState& psi, double gamma, Complex w, SystemState& out);

    Unraveling unraveling_;
    bool has_hamiltonian_;
    CMatrix minus_i_h_;
    CMatrix l_;
    CMatrix g_;       // L^dagger or L_x
    CMatrix gl_;      // G L
    CMatrix ldag_l_;  // L^dagger L
    SystemState l_psi_, g_psi_, gl_psi_, h_psi_, drift_, mid_;
};

// Free-function forms. Each builds a stepper for the call; use SseStepper in loops.
SystemState step_linear(const SystemState& state, const SystemModel& model, Unraveling unraveling, Complex closure,
                        Complex noise_coeff, double dt);
SystemState step_actual(const SystemState& state, const SystemModel& model, Unraveling unraveling, Complex closure,
                        Complex noise_coeff, double dt);
SystemState step_markov(const SystemState& state, const SystemModel& model, double gamma, Complex z, double dt,
                        Variant variant, Unraveling kind);

// Measured Markov current I(t) = z_L(t) + gamma <L> (heterodyne) or
// z_L(t) + gamma <L_x> (homodyne). It differs from the conditioning noise
// z(t) = z_L(t) + (gamma/2) <.> by (gamma/2) <.>: the current is read out one
// step after the bath interaction, the conditioning noise at the same instant.
Complex markov_record(Complex z_lambda, Complex expectation, double gamma, Unraveling kind);

}  // namespace nmsse
