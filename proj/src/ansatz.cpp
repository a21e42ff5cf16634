#include "nmsse/ansatz.hpp"

#include "rk4.hpp"

#include <cmath>
#include <string>

namespace nmsse {

AnsatzSolution solve_ansatz(double g, double delta, const TimeGrid& grid) {
    return solve_ansatz(g, delta, grid, 1e6 * g);
}

AnsatzSolution solve_ansatz(double g, double delta, const TimeGrid& grid, double divergence_bound) {
    using State = Eigen::Vector2cd;
    const double g2 = g * g;
    const auto rhs = [g2, delta](double, const State& f) {
        const Complex total = f(0) + f(1);
        State d;
        d(0) = g2 - kI * delta * f(0) + f(0) * total;
        d(1) = g2 + kI * delta * f(1) + f(1) * total;
        return d;
    };

    AnsatzSolution sol{grid, {}, {}, {}};
    sol.f_total.reserve(grid.size());
    sol.f_plus.reserve(grid.size());
    sol.f_minus.reserve(grid.size());

    State f = State::Zero();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex total = f(0) + f(1);
        if (!std::isfinite(std::abs(total)) || std::abs(total) > divergence_bound)
            throw DivergenceError("ansatz: |F| exceeded " + std::to_string(divergence_bound) + " at t = " +
                                  std::to_string(grid.t(i)));
        sol.f_plus.push_back(f(0));
        sol.f_minus.push_back(f(1));
        sol.f_total.push_back(total);
        if (i + 1 < grid.size()) f = detail::rk4_step(rhs, grid.t(i), f, grid.dt());
    }
    return sol;
}

bool kernel_equivalence_check(const BathConfig& bath, const TimeGrid& grid) {
    const double tolerance = 1e-12 * std::max(1.0, std::abs(memory_kernel(bath, 0.0)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double tau = grid.t(i);
        double real_form = 0.0;
        for (const auto& m : bath.modes()) real_form += m.coupling * m.coupling * std::cos(m.detuning * tau);
        if (std::abs(memory_kernel(bath, tau) - real_form) > tolerance) return false;
    }
    return true;
}

bool kernel_equivalence_check(double g, double delta, const TimeGrid& grid) {
    return kernel_equivalence_check(BathConfig::two_mode(g, delta), grid);
}

}  // namespace nmsse
