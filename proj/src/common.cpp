#include "nmsse/common.hpp"

#include <cmath>

namespace nmsse {

TimeGrid::TimeGrid(double dt, std::size_t size) : dt_(dt), size_(size) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time grid: dt must be positive");
    if (size < 1) throw std::invalid_argument("time grid: needs at least one point");
}

TimeGrid TimeGrid::covering(double dt, double t_final) {
    if (!(dt > 0.0)) throw std::invalid_argument("time grid: dt must be positive");
    if (!(t_final >= 0.0)) throw std::invalid_argument("time grid: t_final must be non-negative");
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    return TimeGrid(dt, steps + 1);
}

}  // namespace nmsse
