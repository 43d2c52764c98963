#pragma once

#include <string>
#include <vector>

#include "emw/io.hpp"

namespace emw::plot {

enum class Kind { surface, profile, timeseries };

Kind parse_kind(const std::string& s);

/// Heatmap of delta_theta over (t, xi).
std::string surface_svg(const WavefieldTable& tab, const std::string& title);
/// delta_theta against xi at the snapshot nearest to t. DomainError when t is outside the run.
std::string profile_svg(const WavefieldTable& tab, double t, const std::string& title);
/// chi against t at the grid point nearest to xi. DomainError when xi is outside the grid.
std::string timeseries_svg(const WavefieldTable& tab, double xi, const std::string& title);

/// Single polyline plot with labeled axes.
std::string line_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& x_label,
                     const std::string& y_label, const std::string& title);

}  // namespace emw::plot
