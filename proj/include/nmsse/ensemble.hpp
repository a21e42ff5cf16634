#pragma once

#include "nmsse/trajectory.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nmsse {

// Ensemble averages on the run grid. Linear runs average the raw projectors
// |psi><psi| (so `norm` is the mean squared norm); actual runs average the
// normalized projectors. Bloch components are present for two-level models
// only; `mean_density` is always filled.
struct EnsembleResult {
    TimeGrid grid;
    std::vector<BlochVector> mean_bloch;
    std::vector<BlochVector> bloch_se;  // standard error of each component
    std::vector<DensityMatrix> mean_density;
    std::uint64_t n_traj = 0;
    std::uint64_t master_seed = 0;
    std::string config_hash;
    std::vector<double> max_norm_drift;  // per trajectory: max_t | |psi| - 1 |
};

struct EnsembleOptions {
    unsigned threads = 1;  // 0 = hardware concurrency
};

class EnsembleError : public Error {
public:
    struct Failure {
        std::uint64_t index;
        std::string message;
    };
    explicit EnsembleError(std::vector<Failure> failures);
    const std::vector<Failure>& failures() const noexcept { return failures_; }

private:
    std::vector<Failure> failures_;
};

// Runs trajectories 0 .. n_traj-1. Trajectories are grouped into fixed blocks
// of consecutive indices, summed sequentially inside a block, and blocks are
// combined along a fixed binary tree over block indices, so the output is
// bitwise independent of the thread count and scheduling.
EnsembleResult run_ensemble(const Scenario& scenario, std::uint64_t n_traj, std::uint64_t master_seed,
                            const EnsembleOptions& options = {});

// Stable identifier of (scenario parameters, n_traj, seed).
std::string config_hash(const ScenarioParams& params, std::uint64_t n_traj, std::uint64_t master_seed);

struct DeviationReport {
    std::array<double, 3> max_abs{};  // x, y, z
    std::vector<std::array<double, 3>> deviation;  // |mean - reference| per grid point
    std::vector<std::array<double, 3>> envelope;   // 3 standard errors per grid point
    std::array<double, 3> inside_fraction{};       // points with deviation <= envelope
    double tolerance = 0.0;
    bool passed = false;

    double max_deviation() const;
    double min_inside_fraction() const;
};

// Deviation of an ensemble from a reference curve sampled on `reference_grid`,
// which must equal the ensemble grid.
DeviationReport compare(const EnsembleResult& result, const TimeGrid& reference_grid,
                        const std::vector<BlochVector>& reference, double tolerance);

// Mutual deviation of two ensembles on the same grid; the envelope is three
// combined standard errors sqrt(se_a^2 + se_b^2).
DeviationReport compare(const EnsembleResult& a, const EnsembleResult& b, double tolerance);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const DensityMatrix& rho);

}  // namespace nmsse
