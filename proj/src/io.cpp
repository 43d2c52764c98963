#include "emw/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "emw/error.hpp"

namespace emw {

std::string wavefield_csv(const WaveField& w, std::size_t every) {
  if (every == 0) throw DomainError("snapshot thinning factor must be >= 1");
  std::string out = "t,xi,delta_theta,chi,v\n";
  char buf[160];
  const std::size_t n = w.snapshots.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k % every != 0 && k + 1 != n) continue;
    const auto& s = w.snapshots[k];
    for (std::size_t i = 0; i < w.grid.n_points; ++i) {
      std::snprintf(buf, sizeof buf, "%.9g,%.6f,%.12e,%.12e,%.12e\n", w.times[k], w.grid.xi[i], s.delta_theta[i],
                    s.chi[i], s.v[i]);
      out += buf;
    }
  }
  return out;
}

namespace {

double parse_number(std::string_view field, std::size_t line, std::size_t col) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("line " + std::to_string(line) + ": '" + std::string(field) + "' is not a number", line, col);
  }
  return value;
}

}  // namespace

WavefieldTable parse_wavefield_csv(const std::string& text) {
  std::istringstream is(text);
  std::string row;
  if (!std::getline(is, row)) throw SchemaError("header", "empty wavefield file");
  if (!row.empty() && row.back() == '\r') row.pop_back();
  if (row != "t,xi,delta_theta,chi,v") throw SchemaError("header", "expected t,xi,delta_theta,chi,v, got '" + row + "'");

  WavefieldTable tab;
  std::map<double, std::size_t> time_index;
  std::size_t line = 1;
  while (std::getline(is, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    double f[5];
    std::size_t start = 0;
    for (int c = 0; c < 5; ++c) {
      const auto comma = row.find(',', start);
      if ((c < 4) == (comma == std::string::npos)) {
        throw ParseError("line " + std::to_string(line) + ": expected 5 fields", line, start + 1);
      }
      const auto stop = c < 4 ? comma : row.size();
      f[c] = parse_number(std::string_view(row).substr(start, stop - start), line, start + 1);
      start = stop + 1;
    }
    auto [it, inserted] = time_index.emplace(f[0], tab.times.size());
    if (inserted) {
      if (!tab.times.empty() && f[0] < tab.times.back()) {
        throw ParseError("line " + std::to_string(line) + ": times must be increasing", line, 1);
      }
      tab.times.push_back(f[0]);
      tab.delta_theta.emplace_back();
      tab.chi.emplace_back();
      tab.v.emplace_back();
    }
    const std::size_t k = it->second;
    if (k == 0) tab.xi.push_back(f[1]);
    tab.delta_theta[k].push_back(f[2]);
    tab.chi[k].push_back(f[3]);
    tab.v[k].push_back(f[4]);
  }
  if (tab.times.empty()) throw SchemaError("rows", "wavefield file has no data rows");
  for (const auto& r : tab.chi) {
    if (r.size() != tab.xi.size()) throw SchemaError("rows", "every snapshot must cover the same grid points");
  }
  return tab;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw IoError("failed writing '" + path + "'");
}

}  // namespace emw
