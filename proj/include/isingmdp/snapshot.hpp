#pragma once

#include <string>
#include <utility>

#include "isingmdp/lattice.hpp"

namespace isingmdp {

// Snapshot text format: first line "N h", then N lines of N characters,
// '+' or '-', row 0 first. h is printed in shortest round-trip form so a
// save/load/save cycle is byte-identical.
std::string write_snapshot(const Configuration& config, double h);
std::pair<Configuration, double> read_snapshot(const std::string& text);

void save_snapshot_file(const std::string& path, const Configuration& config, double h);
std::pair<Configuration, double> load_snapshot_file(const std::string& path);

}  // namespace isingmdp
