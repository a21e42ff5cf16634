#include "nmsse/models.hpp"

#include "rk4.hpp"

#include <cmath>

namespace nmsse {

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Adding +0.0 maps a negative zero to +0.0 and leaves every other value alone.
double unsigned_zero(double v) { return v + 0.0; }

}  // namespace

SystemModel::SystemModel(CMatrix hamiltonian, CMatrix lindblad)
    : hamiltonian_(std::move(hamiltonian)), lindblad_(std::move(lindblad)) {
    const auto d = hamiltonian_.rows();
    if (d < 2) throw std::invalid_argument("system model: dimension must be at least 2");
    if (hamiltonian_.cols() != d || lindblad_.rows() != d || lindblad_.cols() != d)
        throw std::invalid_argument("system model: Hamiltonian and Lindblad operator must be square of equal size");
    const double scale = max_abs(hamiltonian_);
    if (max_abs(hamiltonian_ - hamiltonian_.adjoint()) > 1e-12 * scale)
        throw std::invalid_argument("system model: Hamiltonian is not Hermitian");
}

SystemModel SystemModel::two_level_atom() {
    CMatrix sigma = CMatrix::Zero(2, 2);
    sigma(1, 0) = 1.0;  // |b><e|
    return SystemModel(CMatrix::Zero(2, 2), sigma);
}

CMatrix pseudo_spin_x() {
    CMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

CMatrix pseudo_spin_y() {
    CMatrix s(2, 2);
    s << Complex(0.0, 0.0), kI, -kI, Complex(0.0, 0.0);
    return s;
}

CMatrix pseudo_spin_z() {
    CMatrix s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

std::vector<ExactAmplitudes> exact_evolve(double g, double delta, const TimeGrid& grid) {
    using State = Eigen::Vector4cd;
    const auto rhs = [g, delta](double t, const State& c) {
        const Complex up = std::polar(g, delta * t);    // g e^{i delta t}
        const Complex down = std::polar(g, -delta * t); // g e^{-i delta t}
        State d;
        d(0) = 0.0;
        d(1) = -up * c(2) - down * c(3);
        d(2) = down * c(1);
        d(3) = up * c(1);
        return d;
    };

    std::vector<ExactAmplitudes> out;
    out.reserve(grid.size());
    State c(0.0, 1.0, 0.0, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.push_back({c(0), c(1), c(2), c(3)});
        if (i + 1 < grid.size()) c = detail::rk4_step(rhs, grid.t(i), c, grid.dt());
    }
    return out;
}

BlochVector bloch_from_exact(const ExactAmplitudes& a) {
    const Complex w = a.c2 * std::conj(a.c1);
    const double p1 = std::norm(a.c1), p2 = std::norm(a.c2), p3 = std::norm(a.c3), p4 = std::norm(a.c4);
    return {unsigned_zero(2.0 * w.real()), unsigned_zero(2.0 * w.imag()), p2 - p1 - p3 - p4, p1 + p2 + p3 + p4};
}

BlochVector bloch_from_state(const SystemState& state) {
    if (state.size() != 2) throw std::invalid_argument("bloch vector: state must be two-dimensional");
    const Complex ce = state(0), cb = state(1);
    const Complex w = ce * std::conj(cb);
    const double pe = std::norm(ce), pb = std::norm(cb);
    return {unsigned_zero(2.0 * w.real()), unsigned_zero(2.0 * w.imag()), pe - pb, pe + pb};
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("bloch vector: density matrix must be 2x2");
    // rho = [[(n+z)/2, (x+iy)/2], [(x-iy)/2, (n-z)/2]]
    const Complex coherence = rho(0, 1) + std::conj(rho(1, 0));
    return {unsigned_zero(coherence.real()), unsigned_zero(coherence.imag()), (rho(0, 0) - rho(1, 1)).real(),
            (rho(0, 0) + rho(1, 1)).real()};
}

DensityMatrix density_from_bloch(const BlochVector& b) {
    return 0.5 * (b.norm * CMatrix::Identity(2, 2) + b.x * pseudo_spin_x() + b.y * pseudo_spin_y() +
                  b.z * pseudo_spin_z());
}

DensityMatrix reduced_density(const ExactAmplitudes& a) {
    DensityMatrix rho(2, 2);
    rho(0, 0) = std::norm(a.c2);
    rho(1, 1) = std::norm(a.c1) + std::norm(a.c3) + std::norm(a.c4);
    rho(0, 1) = a.c2 * std::conj(a.c1);
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

std::vector<DensityMatrix> lindblad_evolve(const SystemModel& model, double gamma, const DensityMatrix& rho0,
                                           const TimeGrid& grid) {
    const auto d = model.dimension();
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("lindblad: initial density matrix has the wrong dimension");
    if (max_abs(rho0 - rho0.adjoint()) > 1e-12) throw std::invalid_argument("lindblad: initial state is not Hermitian");
    if (std::abs(rho0.trace() - 1.0) > 1e-9) throw std::invalid_argument("lindblad: initial state must have unit trace");
    if (!(gamma >= 0.0)) throw std::invalid_argument("lindblad: gamma must be non-negative");

    const CMatrix& h = model.hamiltonian();
    const CMatrix& l = model.lindblad();
    const CMatrix ldag = l.adjoint();
    const CMatrix ldag_l = ldag * l;
    const auto rhs = [&](double, const CMatrix& rho) -> CMatrix {
        CMatrix out = -kI * (h * rho - rho * h);
        out += gamma * (l * rho * ldag - 0.5 * (ldag_l * rho + rho * ldag_l));
        return out;
    };

    std::vector<DensityMatrix> out;
    out.reserve(grid.size());
    CMatrix rho = rho0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.push_back(rho);
        if (i + 1 < grid.size()) rho = detail::rk4_step(rhs, grid.t(i), rho, grid.dt());
    }
    return out;
}

std::vector<BlochVector> exact_bloch(double g, double delta, const TimeGrid& grid) {
    std::vector<BlochVector> out;
    out.reserve(grid.size());
    for (const auto& a : exact_evolve(g, delta, grid)) out.push_back(bloch_from_exact(a));
    return out;
}

std::vector<BlochVector> lindblad_bloch(double gamma, const TimeGrid& grid) {
    DensityMatrix rho0 = DensityMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    std::vector<BlochVector> out;
    out.reserve(grid.size());
    for (const auto& rho : lindblad_evolve(SystemModel::two_level_atom(), gamma, rho0, grid))
        out.push_back(bloch_from_density(rho));
    return out;
}

}  // namespace nmsse
