#pragma once

#include "nmsse/bath.hpp"
#include "nmsse/common.hpp"

#include <vector>

namespace nmsse {

// Scalar closure F(t) = int_0^t alpha(t-s) f(t,s) ds for the two-mode bath,
// split as F = F_plus + F_minus by mode. f_total is exactly f_plus + f_minus.
struct AnsatzSolution {
    TimeGrid grid;
    std::vector<Complex> f_total;
    std::vector<Complex> f_plus;
    std::vector<Complex> f_minus;
};

// Integrates
//   F_plus'  = g^2 - i delta F_plus  + F_plus  (F_plus + F_minus)
//   F_minus' = g^2 + i delta F_minus + F_minus (F_plus + F_minus)
// from zero with RK4 on the grid. The equations are of Riccati type and can
// reach a pole in finite time; a DivergenceError is thrown once |F| exceeds
// `divergence_bound` (default 1e6 g).
AnsatzSolution solve_ansatz(double g, double delta, const TimeGrid& grid);
AnsatzSolution solve_ansatz(double g, double delta, const TimeGrid& grid, double divergence_bound);

// True iff the coherent kernel alpha(tau) equals its real symmetric form
// sum_k g_k^2 cos(Omega_k tau) at every grid time (to 1e-12 relative to
// alpha(0)). When it holds, the quadrature unraveling can reuse the coherent
// closure F.
bool kernel_equivalence_check(const BathConfig& bath, const TimeGrid& grid);
bool kernel_equivalence_check(double g, double delta, const TimeGrid& grid);

}  // namespace nmsse
