#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmsse {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Uniform time grid t_i = i * dt, i = 0 .. size-1. Every path, kernel table and
// stepper in a run shares one grid; there is no interpolation between grids.
class TimeGrid {
public:
    TimeGrid(double dt, std::size_t size);

    // Grid covering [0, t_final] with step dt (t_final is rounded to a whole
    // number of steps).
    static TimeGrid covering(double dt, double t_final);

    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return size_; }
    std::size_t steps() const noexcept { return size_ - 1; }
    double t(std::size_t i) const noexcept { return static_cast<double>(i) * dt_; }
    double t_final() const noexcept { return t(size_ - 1); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double dt_;
    std::size_t size_;
};

// Base class for errors raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A deterministic ODE or SSE integration left its domain of validity.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace nmsse
