#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "emw/error.hpp"

namespace emw::plot {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 110, kTop = 40, kBottom = 60;

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0, hi = 1;
};

Range range_of(const std::vector<double>& v) {
  Range r;
  if (v.empty()) return r;
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  r.lo = *mn;
  r.hi = *mx;
  if (!(r.hi > r.lo)) {
    const double pad = r.lo == 0 ? 1.0 : 0.05 * std::abs(r.lo);
    r.lo -= pad;
    r.hi += pad;
  }
  return r;
}

// Roughly five round ticks covering the range.
std::vector<double> ticks(Range r) {
  const double span = r.hi - r.lo;
  const double raw = span / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6) break;
  }
  std::vector<double> t;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

class Canvas {
 public:
  Canvas(Range x, Range y) : x_(x), y_(y) {}

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  std::string axes(const std::string& x_label, const std::string& y_label, const std::string& title) const {
    std::ostringstream os;
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
       << num(y0 - y1) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (double t : ticks(x_)) {
      os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px(t)) << "\" y2=\""
         << num(y0 + 5) << "\" stroke=\"#000\"/>\n";
      os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">" << num(t, "%g")
         << "</text>\n";
    }
    for (double t : ticks(y_)) {
      os << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(x0) << "\" y2=\""
         << num(py(t)) << "\" stroke=\"#000\"/>\n";
      os << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">" << num(t, "%.3g")
         << "</text>\n";
    }
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
       << escape(x_label) << "</text>\n";
    os << "<text x=\"20\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << num((y0 + y1) / 2) << ")\">" << escape(y_label) << "</text>\n";
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-weight=\"bold\">"
       << escape(title) << "</text>\n";
    return os.str();
  }

 private:
  Range x_, y_;
};

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, "%.0f") + "\" height=\"" +
         num(kHeight, "%.0f") + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
}

// Blue-white-red diverging map on [-1, 1].
std::string color(double s) {
  s = std::clamp(s, -1.0, 1.0);
  int r, g, b;
  if (s < 0) {
    r = static_cast<int>(std::lround(255 * (1 + s)));
    g = r;
    b = 255;
  } else {
    r = 255;
    g = static_cast<int>(std::lround(255 * (1 - s)));
    b = g;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::size_t nearest(const std::vector<double>& v, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i] - x) < std::abs(v[best] - x)) best = i;
  }
  return best;
}

}  // namespace

Kind parse_kind(const std::string& s) {
  if (s == "surface") return Kind::surface;
  if (s == "profile") return Kind::profile;
  if (s == "timeseries") return Kind::timeseries;
  throw DomainError("unknown plot kind '" + s + "' (expected surface, profile or timeseries)");
}

std::string line_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& x_label,
                     const std::string& y_label, const std::string& title) {
  Canvas cv(range_of(x), range_of(y));
  std::ostringstream os;
  os << header() << cv.axes(x_label, y_label, title);
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? " " : "") << num(cv.px(x[i])) << "," << num(cv.py(y[i]));
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string surface_svg(const WavefieldTable& tab, const std::string& title) {
  Range tr = range_of(tab.times), xr = range_of(tab.xi);
  Canvas cv(tr, xr);
  double amax = 0;
  for (const auto& row : tab.delta_theta)
    for (double v : row) amax = std::max(amax, std::abs(v));
  if (!(amax > 0)) amax = 1;

  const std::size_t nt = tab.times.size(), nx = tab.xi.size();
  const std::size_t ct = std::min<std::size_t>(nt, 240), cx = std::min<std::size_t>(nx, 160);
  std::ostringstream os;
  os << header();
  const double cw = (kWidth - kLeft - kRight) / static_cast<double>(ct);
  const double ch = (kHeight - kTop - kBottom) / static_cast<double>(cx);
  for (std::size_t a = 0; a < ct; ++a) {
    const std::size_t k = a * nt / ct;
    for (std::size_t b = 0; b < cx; ++b) {
      const std::size_t i = b * nx / cx;
      os << "<rect x=\"" << num(kLeft + static_cast<double>(a) * cw) << "\" y=\""
         << num(kHeight - kBottom - static_cast<double>(b + 1) * ch) << "\" width=\"" << num(cw + 0.3)
         << "\" height=\"" << num(ch + 0.3) << "\" fill=\"" << color(tab.delta_theta[k][i] / amax) << "\"/>\n";
    }
  }
  os << cv.axes("t (s)", "xi (miles)", title);
  // Color bar.
  const double bx = kWidth - kRight + 25, by0 = kTop, by1 = kHeight - kBottom;
  for (int s = 0; s < 50; ++s) {
    const double v = 1.0 - 2.0 * s / 49.0;
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(by0 + s * (by1 - by0) / 50) << "\" width=\"16\" height=\""
       << num((by1 - by0) / 50 + 0.3) << "\" fill=\"" << color(v) << "\"/>\n";
  }
  os << "<text x=\"" << num(bx + 20) << "\" y=\"" << num(by0 + 10) << "\">" << num(amax, "%.3g") << "</text>\n";
  os << "<text x=\"" << num(bx + 20) << "\" y=\"" << num(by1) << "\">" << num(-amax, "%.3g") << "</text>\n";
  os << "<text x=\"" << num(bx) << "\" y=\"" << num(by0 - 8) << "\">delta_theta (rad)</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string profile_svg(const WavefieldTable& tab, double t, const std::string& title) {
  if (t < tab.times.front() || t > tab.times.back()) {
    throw DomainError("profile time " + num(t, "%g") + " s is outside the run [" + num(tab.times.front(), "%g") +
                      ", " + num(tab.times.back(), "%g") + "]");
  }
  const std::size_t k = nearest(tab.times, t);
  return line_svg(tab.xi, tab.delta_theta[k], "xi (miles)", "delta_theta (rad)",
                  title.empty() ? "delta_theta at t = " + num(tab.times[k], "%.4g") + " s" : title);
}

std::string timeseries_svg(const WavefieldTable& tab, double xi, const std::string& title) {
  if (xi < tab.xi.front() || xi > tab.xi.back()) {
    throw DomainError("position " + num(xi, "%g") + " miles is outside the grid [" + num(tab.xi.front(), "%g") +
                      ", " + num(tab.xi.back(), "%g") + "]");
  }
  const std::size_t i = nearest(tab.xi, xi);
  std::vector<double> chi(tab.times.size());
  for (std::size_t k = 0; k < chi.size(); ++k) chi[k] = tab.chi[k][i];
  return line_svg(tab.times, chi, "t (s)", "chi (rad/s)",
                  title.empty() ? "chi at xi = " + num(tab.xi[i], "%.4g") + " miles" : title);
}

}  // namespace emw::plot
