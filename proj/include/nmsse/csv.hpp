#pragma once

#include "nmsse/ensemble.hpp"
#include "nmsse/trajectory.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nmsse {

// Bloch time series as CSV: header `t,x,y,z,norm` (plus `,x_se,y_se,z_se`
// when standard errors are given), one row per grid point, numbers in
// general notation with 17 significant digits (trailing zeros dropped), LF
// line endings. Values read back bitwise. A path of "-" writes to stdout.
void write_bloch_csv(std::ostream& out, const TimeGrid& grid, const std::vector<BlochVector>& bloch,
                     const std::vector<BlochVector>* se = nullptr);

// Ensemble means with standard errors.
void emit_csv(const EnsembleResult& result, const std::string& path);
// Single trajectory (raw state, norm column = squared norm).
void emit_csv(const TrajectoryRecord& record, const std::string& path);
// Oracle curve without standard errors.
void emit_csv(const TimeGrid& grid, const std::vector<BlochVector>& bloch, const std::string& path);

// Formats one value as written to the CSV files.
std::string format_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in);

}  // namespace nmsse
