#include "sweep/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sweep {

namespace {

void append_number(std::string& row, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    row += buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t d = traj.dim();
    std::string header = "t";
    for (std::size_t i = 0; i < d; ++i) header += ",x_" + std::to_string(i);
    for (std::size_t i = 0; i < d; ++i) header += ",z_" + std::to_string(i);
    header += ",dist_C,volterra_norm\n";
    out << header;

    for (std::size_t k = 0; k < traj.grid().node_count(); ++k) {
        std::string row;
        append_number(row, traj.grid().nodes[k]);
        for (std::size_t i = 0; i < d; ++i) {
            row += ',';
            append_number(row, traj.x.values[k][i]);
        }
        for (std::size_t i = 0; i < d; ++i) {
            row += ',';
            append_number(row, traj.z.values[k][i]);
        }
        row += ',';
        append_number(row, traj.residuals[k]);
        row += ',';
        append_number(row, norm(traj.volterra.values[k]));
        row += '\n';
        out << row;
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_trajectory_csv(out, traj);
}

GridFunction read_selection_csv(const std::string& path, const TimeGrid& grid, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open selection file '" + path + "'");

    GridFunction z = GridFunction::zeros(grid, dim, SampleKind::Selection);
    std::string line;
    std::size_t row = 0;
    std::size_t skip_cols = 0;  // x-columns when replaying a trajectory export
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            const char head = line[0];
            if (!(std::isdigit(static_cast<unsigned char>(head)) || head == '-' || head == '+' ||
                  head == '.')) {
                for (std::size_t pos = line.find(",x_"); pos != std::string::npos;
                     pos = line.find(",x_", pos + 1))
                    ++skip_cols;
                continue;  // header row
            }
        }
        if (row >= grid.node_count()) throw ConfigError("selection file has too many rows");
        std::istringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ',')) throw ConfigError("selection file: short row");
        const double t = std::stod(cell);
        if (std::abs(t - grid.nodes[row]) > 1e-9)
            throw ConfigError("selection file times disagree with the solver grid");
        for (std::size_t i = 0; i < skip_cols; ++i)
            if (!std::getline(ss, cell, ',')) throw ConfigError("selection file: short row");
        for (std::size_t i = 0; i < dim; ++i) {
            if (!std::getline(ss, cell, ',')) throw ConfigError("selection file: short row");
            z.values[row][i] = std::stod(cell);
        }
        ++row;
    }
    if (row != grid.node_count()) throw ConfigError("selection file row count disagrees with grid");
    return z;
}

}  // namespace sweep
