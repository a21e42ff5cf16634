#include "nmsse/csv.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nmsse {

namespace {

template <class Writer>
void with_output(const std::string& path, Writer&& write) {
    if (path == "-") {
        write(std::cout);
        std::cout.flush();
        if (!std::cout) throw Error("csv: failed writing to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("csv: cannot open '" + path + "' for writing");
    write(out);
    out.close();
    if (!out) throw Error("csv: failed writing '" + path + "'");
}

void append_number(std::string& line, double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v + 0.0, std::chars_format::general, 17);
    line.append(buf, r.ptr);
}

}  // namespace

std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

void write_bloch_csv(std::ostream& out, const TimeGrid& grid, const std::vector<BlochVector>& bloch,
                     const std::vector<BlochVector>* se) {
    if (bloch.size() != grid.size()) throw std::invalid_argument("csv: series length does not match the grid");
    if (se && se->size() != grid.size()) throw std::invalid_argument("csv: error series length does not match the grid");
    out << (se ? "t,x,y,z,norm,x_se,y_se,z_se\n" : "t,x,y,z,norm\n");
    std::string line;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        line.clear();
        const auto& b = bloch[i];
        for (const double v : {grid.t(i), b.x, b.y, b.z, b.norm}) {
            if (!line.empty()) line += ',';
            append_number(line, v);
        }
        if (se) {
            for (const double v : {(*se)[i].x, (*se)[i].y, (*se)[i].z}) {
                line += ',';
                append_number(line, v);
            }
        }
        line += '\n';
        out << line;
    }
}

void emit_csv(const EnsembleResult& result, const std::string& path) {
    if (result.mean_bloch.size() != result.grid.size())
        throw std::invalid_argument("csv: ensemble has no Bloch components");
    with_output(path, [&](std::ostream& out) { write_bloch_csv(out, result.grid, result.mean_bloch, &result.bloch_se); });
}

void emit_csv(const TrajectoryRecord& record, const std::string& path) {
    with_output(path, [&](std::ostream& out) { write_bloch_csv(out, record.grid, record.bloch); });
}

void emit_csv(const TimeGrid& grid, const std::vector<BlochVector>& bloch, const std::string& path) {
    with_output(path, [&](std::ostream& out) { write_bloch_csv(out, grid, bloch); });
}

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error("csv: missing header");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        for (;;) {
            double v = 0.0;
            const auto r = std::from_chars(p, end, v);
            if (r.ec != std::errc()) throw Error("csv: bad number on line " + std::to_string(line_no));
            row.push_back(v);
            p = r.ptr;
            if (p == end) break;
            if (*p != ',') throw Error("csv: bad separator on line " + std::to_string(line_no));
            ++p;
        }
        if (row.size() != table.header.size())
            throw Error("csv: line " + std::to_string(line_no) + " has " + std::to_string(row.size()) + " fields");
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("csv: cannot open '" + path + "'");
    return parse_csv(in);
}

}  // namespace nmsse
