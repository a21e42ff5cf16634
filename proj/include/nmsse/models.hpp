#pragma once

#include "nmsse/common.hpp"

#include <vector>

namespace nmsse {

// Conditioned system state (C_e at index 0, C_b at index 1 for the two-level atom).
using SystemState = CVector;
using DensityMatrix = CMatrix;

// System Hamiltonian H (frequency units) and Lindblad operator L, both dense
// d x d. L_x = L + L^dagger is derived on demand.
class SystemModel {
public:
    SystemModel(CMatrix hamiltonian, CMatrix lindblad);

    // Two-level atom with H = 0 and L = sigma = |b><e| (basis order e, b).
    static SystemModel two_level_atom();

    Eigen::Index dimension() const noexcept { return hamiltonian_.rows(); }
    const CMatrix& hamiltonian() const noexcept { return hamiltonian_; }
    const CMatrix& lindblad() const noexcept { return lindblad_; }
    CMatrix lindblad_x() const { return lindblad_ + lindblad_.adjoint(); }

private:
    CMatrix hamiltonian_;
    CMatrix lindblad_;
};

// Amplitudes of |b00>, |e00>, |b01>, |b10> for the atom plus two-mode bath.
struct ExactAmplitudes {
    Complex c1, c2, c3, c4;
};

// Pseudo-spin vector; `norm` is the trace weight (1 for normalized states).
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double norm = 1.0;
};

// Pseudo-spin matrices in the (e, b) basis. The y matrix follows the
// convention y = -i c2 c1* + i c2* c1 of the exact reduced state, i.e.
// sigma_y = i|e><b| - i|b><e|.
CMatrix pseudo_spin_x();
CMatrix pseudo_spin_y();
CMatrix pseudo_spin_z();

// Integrates the four amplitude equations of the atom coupled to modes at
// +/-delta from |e00>, with RK4 on the grid. Returns one entry per grid point.
std::vector<ExactAmplitudes> exact_evolve(double g, double delta, const TimeGrid& grid);

BlochVector bloch_from_exact(const ExactAmplitudes& a);

// Same pseudo-spin convention applied to (C_e, C_b); unnormalized states
// report their raw weight in `norm`. Requires dimension 2.
BlochVector bloch_from_state(const SystemState& state);

// Bloch components tr(rho sigma_i) and trace of a 2x2 density matrix.
BlochVector bloch_from_density(const DensityMatrix& rho);

// 1/2 (norm I + x sigma_x + y sigma_y + z sigma_z).
DensityMatrix density_from_bloch(const BlochVector& b);

// Atom state after tracing out the two bath modes.
DensityMatrix reduced_density(const ExactAmplitudes& a);

// rho' = -i[H, rho] + gamma (L rho L^dagger - 1/2 L^dagger L rho - 1/2 rho L^dagger L),
// integrated with RK4 on the grid.
std::vector<DensityMatrix> lindblad_evolve(const SystemModel& model, double gamma, const DensityMatrix& rho0,
                                           const TimeGrid& grid);

// Oracle curves on a grid. exact_bloch: atom plus two-mode bath from |e00>.
// lindblad_bloch: two-level atom with L = sigma from |e><e|.
std::vector<BlochVector> exact_bloch(double g, double delta, const TimeGrid& grid);
std::vector<BlochVector> lindblad_bloch(double gamma, const TimeGrid& grid);

}  // namespace nmsse
