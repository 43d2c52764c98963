#pragma once

#include <string>
#include <vector>

#include "emw/solver.hpp"

namespace emw {

/// Long-format CSV with header t,xi,delta_theta,chi,v; one row per point of every
/// `every`-th snapshot (the last snapshot is always kept).
std::string wavefield_csv(const WaveField& w, std::size_t every = 1);

/// Dense view of a wavefield CSV: rows are snapshot times, columns grid points.
struct WavefieldTable {
  std::vector<double> times;
  std::vector<double> xi;
  std::vector<std::vector<double>> delta_theta;
  std::vector<std::vector<double>> chi;
  std::vector<std::vector<double>> v;
};

/// ParseError (with line) for malformed rows, SchemaError for a wrong header
/// or a ragged table.
WavefieldTable parse_wavefield_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace emw
