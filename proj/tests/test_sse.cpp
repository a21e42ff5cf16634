#include "nmsse/random.hpp"
#include "nmsse/sse.hpp"

#include <doctest.h>

#include <cmath>

using namespace nmsse;

namespace {

SystemState random_state(RandomStream& rng, Eigen::Index d = 2, bool normalize = true) {
    SystemState psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = Complex(rng.normal(), rng.normal());
    if (normalize) psi.normalize();
    return psi;
}

Complex random_complex(RandomStream& rng) { return {rng.normal(), rng.normal()}; }

// Explicit amplitude equations for the two-level atom (H = 0, L = sigma),
// written out by hand. w is the noise as it enters the equation: z* for the
// coherent unraveling, the real z for quadrature.
struct TlaRates {
    Complex e, b;
};

TlaRates linear_rates(Complex ce, Complex cb, Complex f, Complex w) {
    (void)cb;
    return {-f * ce, w * ce};
}

TlaRates actual_coherent_rates(Complex ce, Complex cb, Complex f, Complex w) {
    const double pe = std::norm(ce), pb = std::norm(cb);
    return {-ce * ce * std::conj(cb) * w + f * ce * (-1.0 + pe - pe * pb),
            ce * (1.0 - pb) * w + f * cb * pe * (2.0 - pb)};
}

TlaRates actual_quadrature_rates(Complex ce, Complex cb, Complex f, Complex w) {
    const TlaRates c = actual_coherent_rates(ce, cb, f, w);
    const Complex cbs = std::conj(cb);
    return {c.e - f * ce * ce * ce * cbs * cbs, c.b + f * cbs * ce * ce * (1.0 - std::norm(cb))};
}

double max_diff(const SystemState& a, const SystemState& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("generic steppers equal the explicit two-level equations") {
    const auto tla = SystemModel::two_level_atom();
    RandomStream rng(2024);
    const double dt = 0.01;
    for (const auto u : {Unraveling::coherent, Unraveling::quadrature}) {
        SseStepper stepper(tla, u);
        const bool real = u == Unraveling::quadrature;
        for (int n = 0; n < 100; ++n) {
            const SystemState psi = random_state(rng);
            const Complex f = real ? Complex(rng.normal(), 0.0) : random_complex(rng);
            const Complex z = real ? Complex(rng.normal(), 0.0) : random_complex(rng);
            const Complex w = real ? z : std::conj(z);

            SystemState lin = psi;
            stepper.step_linear(lin, f, w, dt);
            const auto lr = linear_rates(psi(0), psi(1), f, w);
            SystemState expect(2);
            expect << psi(0) + dt * lr.e, psi(1) + dt * lr.b;
            CHECK(max_diff(lin, expect) <= 1e-12);

            SystemState act = psi;
            stepper.step_actual(act, f, w, dt);
            const auto ar = real ? actual_quadrature_rates(psi(0), psi(1), f, w)
                                 : actual_coherent_rates(psi(0), psi(1), f, w);
            expect << psi(0) + dt * ar.e, psi(1) + dt * ar.b;
            CHECK(max_diff(act, expect) <= 1e-12);

            CHECK(step_linear(psi, tla, u, f, w, dt) == lin);
            CHECK(step_actual(psi, tla, u, f, w, dt) == act);
        }
    }
}

TEST_CASE("actual drift is norm-preserving") {
    RandomStream rng(5);
    CMatrix h(3, 3), l(3, 3);
    h << 1.0, 0.2, 0.0, 0.2, -0.5, Complex(0.0, 0.4), 0.0, Complex(0.0, -0.4), 0.3;
    l << 0.1, 1.0, 0.0, 0.0, 0.3, 0.7, 0.2, 0.0, 0.0;
    for (const auto& model : {SystemModel::two_level_atom(), SystemModel(h, l)}) {
        for (const auto u : {Unraveling::coherent, Unraveling::quadrature}) {
            SseStepper stepper(model, u);
            for (int n = 0; n < 50; ++n) {
                const SystemState psi = random_state(rng, model.dimension());
                const Complex f = random_complex(rng), w = random_complex(rng);
                const double dt = 1e-3;
                SystemState next = psi;
                stepper.step_actual(next, f, w, dt);
                const SystemState v = (next - psi) / dt;
                CHECK(std::abs(psi.dot(v).real()) <= 1e-12 * (1.0 + v.norm()));
                CHECK(next.squaredNorm() - 1.0 == doctest::Approx(dt * dt * v.squaredNorm()).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("quadrature steps keep real states real") {
    const auto tla = SystemModel::two_level_atom();
    SseStepper stepper(tla, Unraveling::quadrature);
    RandomStream rng(17);
    SystemState lin(2), act(2);
    lin << 1.0, 0.0;
    act << 1.0, 0.0;
    for (int n = 0; n < 1000; ++n) {
        const Complex f(rng.normal(), 0.0), z(rng.normal(), 0.0);
        stepper.step_linear(lin, f, z, 1e-3);
        stepper.step_actual(act, f, z, 1e-3);
        for (int i = 0; i < 2; ++i) {
            REQUIRE(lin(i).imag() == 0.0);
            REQUIRE(act(i).imag() == 0.0);
        }
    }
    CHECK(bloch_from_state(act).y == 0.0);
    CHECK(!std::signbit(bloch_from_state(act).y));
}

TEST_CASE("expectations of the normalized state") {
    const auto tla = SystemModel::two_level_atom();
    SseStepper coherent(tla, Unraveling::coherent), quad(tla, Unraveling::quadrature);
    SystemState psi(2);
    psi << Complex(0.6, 0.0), Complex(0.0, 0.8);
    const SystemState scaled = 3.0 * psi;
    const auto e = coherent.expectations(scaled);
    CHECK(e.norm_squared == doctest::Approx(9.0));
    CHECK(std::abs(e.l - std::conj(psi(1)) * psi(0)) < 1e-15);
    CHECK(std::abs(e.g - std::conj(psi(0)) * psi(1)) < 1e-15);
    CHECK(std::abs(e.gl - 0.36) < 1e-15);
    const auto q = quad.expectations(psi);
    CHECK(std::abs(q.g - 2.0 * (std::conj(psi(0)) * psi(1)).real()) < 1e-15);
    CHECK_THROWS_AS(coherent.expectations(SystemState::Zero(2)), DivergenceError);
    SystemState zero = SystemState::Zero(2);
    CHECK_THROWS_AS(coherent.step_actual(zero, 1.0, 1.0, 0.1), DivergenceError);
}

TEST_CASE("Markov linear step equals the explicit equations") {
    const auto tla = SystemModel::two_level_atom();
    RandomStream rng(8);
    const double gamma = 0.7, dt = 1e-2;
    for (int n = 0; n < 100; ++n) {
        const SystemState psi = random_state(rng, 2, false);
        const Complex z = random_complex(rng);
        const SystemState het = step_markov(psi, tla, gamma, z, dt, Variant::linear, Unraveling::heterodyne);
        const SystemState hom =
            step_markov(psi, tla, gamma, Complex(z.real(), 0.0), dt, Variant::linear, Unraveling::homodyne);
        SystemState expect(2);
        expect << psi(0) * (1.0 - 0.5 * gamma * dt), psi(1) + dt * std::conj(z) * psi(0);
        CHECK(max_diff(het, expect) <= 1e-14);
        expect << psi(0) * (1.0 - 0.5 * gamma * dt), psi(1) + dt * z.real() * psi(0);
        CHECK(max_diff(hom, expect) <= 1e-14);
    }
}

TEST_CASE("Markov steps conserve the mean squared norm at Ito order") {
    // For psi' = psi + dt (A + xi B) psi with E xi = 0 and E|xi|^2 = gamma/dt,
    // E|psi'|^2 = |psi + dt A psi|^2 + gamma dt |B psi|^2 must equal
    // |psi|^2 up to O(dt^2).
    CMatrix h(3, 3), l(3, 3);
    h << 1.0, 0.2, 0.0, 0.2, -0.5, Complex(0.0, 0.4), 0.0, Complex(0.0, -0.4), 0.3;
    l << 0.1, 1.0, 0.0, 0.0, 0.3, 0.7, 0.2, 0.0, 0.0;
    RandomStream rng(31);
    const double gamma = 1.3;
    for (const auto& model : {SystemModel::two_level_atom(), SystemModel(h, l)}) {
        for (const auto u : {Unraveling::heterodyne, Unraveling::homodyne}) {
            for (const auto v : {Variant::linear, Variant::actual}) {
                SseStepper stepper(model, u);
                for (int n = 0; n < 20; ++n) {
                    const SystemState psi = random_state(rng, model.dimension(), v == Variant::actual);
                    for (double dt : {1e-3, 1e-4}) {
                        Complex shift{0.0, 0.0};
                        if (v == Variant::actual) {
                            const auto e = stepper.expectations(psi);
                            shift = u == Unraveling::homodyne ? Complex(0.5 * gamma * e.g.real(), 0.0)
                                                              : 0.5 * gamma * e.l;
                        }
                        SystemState drift_only = psi, with_noise = psi;
                        stepper.step_markov(drift_only, gamma, shift, dt, v);
                        stepper.step_markov(with_noise, gamma, shift + Complex(1.0, 0.0), dt, v);
                        const double noise_sq = (with_noise - drift_only).squaredNorm();  // dt^2 |B psi|^2
                        double mean_sq = drift_only.squaredNorm() + gamma / dt * noise_sq;
                        if (u == Unraveling::heterodyne) {
                            // Complex noise: Re and Im parts each carry half the variance.
                            SystemState with_imag = psi;
                            stepper.step_markov(with_imag, gamma, shift + Complex(0.0, 1.0), dt, v);
                            const double imag_sq = (with_imag - drift_only).squaredNorm();
                            mean_sq = drift_only.squaredNorm() + 0.5 * gamma / dt * (noise_sq + imag_sq);
                        }
                        CHECK(std::abs(mean_sq - psi.squaredNorm()) <= 50.0 * dt * dt * psi.squaredNorm());
                    }
                }
            }
        }
    }
}

TEST_CASE("Stratonovich midpoint step") {
    const auto tla = SystemModel::two_level_atom();
    SseStepper het(tla, Unraveling::heterodyne), hom(tla, Unraveling::homodyne);
    RandomStream rng(4);
    const double gamma = 1.0, dt = 0.05;
    const SystemState psi = random_state(rng);
    const Complex z = random_complex(rng);
    const auto rhs = [&](const SystemState& s) {
        SystemState r(2);
        r << -0.5 * gamma * s(0), std::conj(z) * s(0);
        return r;
    };
    const SystemState expect = psi + dt * rhs(psi + 0.5 * dt * rhs(psi));
    SystemState got = psi;
    het.step_markov_stratonovich(got, gamma, z, dt);
    CHECK(max_diff(got, expect) <= 1e-15);
    CHECK_THROWS_AS(hom.step_markov_stratonovich(got, gamma, z, dt), std::logic_error);
    SseStepper coherent(tla, Unraveling::coherent);
    CHECK_THROWS_AS(coherent.step_markov(got, gamma, z, dt, Variant::linear), std::logic_error);
}

TEST_CASE("Markov measurement record") {
    CHECK(markov_record(Complex(0.5, 0.1), Complex(0.2, 0.3), 2.0, Unraveling::heterodyne) == Complex(0.9, 0.7));
    CHECK(markov_record(Complex(0.5, 0.0), Complex(0.2, 0.3), 2.0, Unraveling::homodyne) == Complex(0.9, 0.0));
    CHECK_THROWS_AS(markov_record(Complex(), Complex(), 1.0, Unraveling::coherent), std::invalid_argument);
}

TEST_CASE("unraveling helpers") {
    CHECK(uses_real_noise(Unraveling::quadrature));
    CHECK(uses_real_noise(Unraveling::homodyne));
    CHECK_FALSE(uses_real_noise(Unraveling::coherent));
    CHECK(is_markov(Unraveling::heterodyne));
    CHECK_FALSE(is_markov(Unraveling::quadrature));
    CHECK(std::string(to_string(Unraveling::homodyne)) == "homodyne");
    CHECK(std::string(to_string(Variant::linear)) == "linear");
}
