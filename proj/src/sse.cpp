#include "nmsse/sse.hpp"

namespace nmsse {

const char* to_string(Unraveling u) noexcept {
    switch (u) {
    case Unraveling::coherent: return "coherent";
    case Unraveling::quadrature: return "quadrature";
    case Unraveling::heterodyne: return "heterodyne";
    case Unraveling::homodyne: return "homodyne";
    }
    return "?";
}

const char* to_string(Variant v) noexcept { return v == Variant::linear ? "linear" : "actual"; }

SseStepper::SseStepper(const SystemModel& model, Unraveling unraveling)
    : unraveling_(unraveling),
      has_hamiltonian_(!model.hamiltonian().isZero(0.0)),
      minus_i_h_(-kI * model.hamiltonian()),
      l_(model.lindblad()),
      g_(uses_real_noise(unraveling) ? model.lindblad_x() : CMatrix(model.lindblad().adjoint())),
      gl_(g_ * l_),
      ldag_l_(model.lindblad().adjoint() * model.lindblad()) {
    const auto d = model.dimension();
    for (auto* v : {&l_psi_, &g_psi_, &gl_psi_, &h_psi_, &drift_, &mid_}) v->setZero(d);
}

Complex SseStepper::noise_coefficient(Complex z) const {
    return uses_real_noise(unraveling_) ? z : std::conj(z);
}

Expectations SseStepper::expectations(const SystemState& psi) const {
    const double n2 = psi.squaredNorm();
    if (!(n2 >= 1e-24)) throw DivergenceError("sse: state norm fell below 1e-12; expectations are undefined");
    const SystemState lpsi = l_ * psi;
    return {psi.dot(lpsi) / n2, psi.dot(g_ * psi) / n2, psi.dot(gl_ * psi) / n2, n2};
}

void SseStepper::step_linear(SystemState& psi, Complex closure, Complex noise_coeff, double dt) {
    l_psi_.noalias() = l_ * psi;
    gl_psi_.noalias() = gl_ * psi;
    drift_ = noise_coeff * l_psi_ - closure * gl_psi_;
    if (has_hamiltonian_) drift_.noalias() += minus_i_h_ * psi;
    psi += dt * drift_;
}

Expectations SseStepper::step_actual(SystemState& psi, Complex closure, Complex noise_coeff, double dt) {
    const double n2 = psi.squaredNorm();
    if (!(n2 >= 1e-24)) throw DivergenceError("sse: state norm fell below 1e-12; expectations are undefined");
    l_psi_.noalias() = l_ * psi;
    g_psi_.noalias() = g_ * psi;
    gl_psi_.noalias() = gl_ * psi;
    const Complex exp_l = psi.dot(l_psi_) / n2;
    const Complex exp_g = psi.dot(g_psi_) / n2;
    const Complex exp_gl = psi.dot(gl_psi_) / n2;

    drift_ = noise_coeff * (l_psi_ - exp_l * psi) - closure * (gl_psi_ - exp_g * l_psi_) +
             (closure * (exp_gl - exp_g * exp_l)) * psi;
    if (has_hamiltonian_) drift_.noalias() += minus_i_h_ * psi;
    psi += dt * drift_;
    return {exp_l, exp_g, exp_gl, n2};
}

void SseStepper::linear_markov_rhs(const SystemState& psi, double gamma, Complex w, SystemState& out) {
    l_psi_.noalias() = l_ * psi;
    h_psi_.noalias() = ldag_l_ * psi;
    out = w * l_psi_ - (0.5 * gamma) * h_psi_;
    if (has_hamiltonian_) out.noalias() += minus_i_h_ * psi;
}

Expectations SseStepper::step_markov(SystemState& psi, double gamma, Complex z, double dt, Variant variant) {
    if (!is_markov(unraveling_)) throw std::logic_error("sse: Markov step on a non-Markovian unraveling");
    const Complex w = noise_coefficient(z);
    if (variant == Variant::linear) {
        linear_markov_rhs(psi, gamma, w, drift_);
        psi += dt * drift_;
        return {};
    }

    const double n2 = psi.squaredNorm();
    if (!(n2 >= 1e-24)) throw DivergenceError("sse: state norm fell below 1e-12; expectations are undefined");
    l_psi_.noalias() = l_ * psi;
    g_psi_.noalias() = g_ * psi;
    h_psi_.noalias() = ldag_l_ * psi;
    const Complex exp_l = psi.dot(l_psi_) / n2;
    const Complex exp_g = psi.dot(g_psi_) / n2;
    const Complex exp_ldag = std::conj(exp_l);

    drift_ = w * (l_psi_ - exp_l * psi) - (0.5 * gamma) * (h_psi_ - exp_ldag * l_psi_);
    if (unraveling_ == Unraveling::homodyne) drift_ -= (0.5 * gamma) * (exp_l * l_psi_ - (exp_l * exp_l) * psi);
    if (has_hamiltonian_) drift_.noalias() += minus_i_h_ * psi;
    psi += dt * drift_;
    return {exp_l, exp_g, Complex{}, n2};
}

void SseStepper::step_markov_stratonovich(SystemState& psi, double gamma, Complex z, double dt) {
    if (unraveling_ != Unraveling::heterodyne)
        throw std::logic_error("sse: the Stratonovich midpoint step is defined for linear heterodyne only");
    const Complex w = std::conj(z);
    linear_markov_rhs(psi, gamma, w, drift_);
    mid_ = psi + (0.5 * dt) * drift_;
    linear_markov_rhs(mid_, gamma, w, drift_);
    psi += dt * drift_;
}

SystemState step_linear(const SystemState& state, const SystemModel& model, Unraveling unraveling, Complex closure,
                        Complex noise_coeff, double dt) {
    SseStepper stepper(model, unraveling);
    SystemState psi = state;
    stepper.step_linear(psi, closure, noise_coeff, dt);
    return psi;
}

SystemState step_actual(const SystemState& state, const SystemModel& model, Unraveling unraveling, Complex closure,
                        Complex noise_coeff, double dt) {
    SseStepper stepper(model, unraveling);
    SystemState psi = state;
    stepper.step_actual(psi, closure, noise_coeff, dt);
    return psi;
}

SystemState step_markov(const SystemState& state, const SystemModel& model, double gamma, Complex z, double dt,
                        Variant variant, Unraveling kind) {
    SseStepper stepper(model, kind);
    SystemState psi = state;
    stepper.step_markov(psi, gamma, z, dt, variant);
    return psi;
}

Complex markov_record(Complex z_lambda, Complex expectation, double gamma, Unraveling kind) {
    if (kind == Unraveling::homodyne) return Complex(z_lambda.real() + gamma * expectation.real(), 0.0);
    if (kind == Unraveling::heterodyne) return z_lambda + gamma * expectation;
    throw std::invalid_argument("markov record: kind must be heterodyne or homodyne");
}

}  // namespace nmsse
