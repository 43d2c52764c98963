#include "emw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "emw/error.hpp"

namespace emw {

std::size_t ArrivalCurve::detected() const {
  return static_cast<std::size_t>(std::count_if(arrival_t.begin(), arrival_t.end(), [](auto& a) { return a.has_value(); }));
}

ArrivalCurve detect_arrival_times(const WaveField& w, double threshold_frac) {
  if (!(threshold_frac > 0 && threshold_frac < 1)) throw DomainError("threshold_frac must be in (0, 1)");
  ArrivalCurve curve;
  curve.threshold_frac = threshold_frac;
  curve.xi = w.grid.xi;
  curve.arrival_t.assign(w.grid.n_points, std::nullopt);
  for (const auto& s : w.snapshots) curve.reference = std::max(curve.reference, std::abs(s.chi.front()));
  if (!(curve.reference > 0)) return curve;
  const double thr = threshold_frac * curve.reference;
  for (std::size_t i = 0; i < w.grid.n_points; ++i) {
    for (std::size_t k = 0; k < w.snapshots.size(); ++k) {
      const double a = std::abs(w.snapshots[k].chi[i]);
      if (a < thr) continue;
      if (k == 0) {
        curve.arrival_t[i] = w.times[0];
      } else {
        const double a0 = std::abs(w.snapshots[k - 1].chi[i]);
        const double f = (thr - a0) / (a - a0);
        curve.arrival_t[i] = w.times[k - 1] + f * (w.times[k] - w.times[k - 1]);
      }
      break;
    }
  }
  return curve;
}

VelocityEstimate estimate_velocity(const ArrivalCurve& curve, double xi_lo, double xi_hi) {
  std::vector<double> t, x;
  for (std::size_t i = 0; i < curve.xi.size(); ++i) {
    if (!curve.arrival_t[i] || curve.xi[i] < xi_lo || curve.xi[i] > xi_hi) continue;
    t.push_back(*curve.arrival_t[i]);
    x.push_back(curve.xi[i]);
  }
  if (t.size() < 3) {
    throw DomainError("velocity estimate needs at least 3 arrivals, got " + std::to_string(t.size()));
  }
  const double n = static_cast<double>(t.size());
  double mt = 0, mx = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    mx += x[i];
  }
  mt /= n;
  mx /= n;
  double stt = 0, sxx = 0, stx = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sxx += (x[i] - mx) * (x[i] - mx);
    stx += (t[i] - mt) * (x[i] - mx);
  }
  if (!(stt > 0)) throw DomainError("arrival times are all equal; velocity is undefined");
  VelocityEstimate e;
  e.velocity = stx / stt;
  e.r2 = sxx > 0 ? stx * stx / (stt * sxx) : 1.0;
  e.points = t.size();
  return e;
}

std::vector<std::optional<VelocityEstimate>> segment_velocities(const ArrivalCurve& curve, const ContinuumGrid& grid) {
  std::vector<std::optional<VelocityEstimate>> out;
  for (const auto& seg : grid.segments) {
    const double lo = grid.xi[seg.begin] + 0.5 * grid.dxi;
    const double hi = grid.xi[seg.end] - 0.5 * grid.dxi;
    try {
      out.emplace_back(estimate_velocity(curve, lo, hi));
    } catch (const DomainError&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

std::vector<double> amplitude_profile(const WaveField& w) {
  if (w.snapshots.empty()) throw DomainError("wave field has no snapshots");
  std::vector<double> peak(w.grid.n_points, 0.0);
  for (const auto& s : w.snapshots) {
    for (std::size_t i = 0; i < peak.size(); ++i) peak[i] = std::max(peak[i], std::abs(s.chi[i]));
  }
  return peak;
}

std::vector<double> segment_mean_peaks(const std::vector<double>& profile, const ContinuumGrid& grid) {
  std::vector<double> out;
  for (const auto& seg : grid.segments) {
    double sum = 0;
    for (std::size_t i = seg.begin; i <= seg.end; ++i) sum += profile[i];
    out.push_back(sum / static_cast<double>(seg.points()));
  }
  return out;
}

ModelDivergence compare_models(const WaveField& a, const WaveField& b) {
  if (a.grid.n_points != b.grid.n_points || a.grid.dxi != b.grid.dxi || a.grid.xi != b.grid.xi) {
    throw DomainError("cannot compare wave fields on different grids");
  }
  if (a.times.empty() || b.times.empty()) throw DomainError("cannot compare empty wave fields");
  ModelDivergence d;
  const double tol = 1e-9 * std::max(1.0, std::abs(b.times.back()));
  std::size_t j = 0;
  std::vector<double> bchi(a.grid.n_points), btheta(a.grid.n_points);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const double t = a.times[k];
    if (t < b.times.front() - tol || t > b.times.back() + tol) continue;
    while (j + 1 < b.times.size() && b.times[j + 1] < t - tol) ++j;
    const auto& s0 = b.snapshots[j];
    const auto& s1 = b.snapshots[std::min(j + 1, b.times.size() - 1)];
    const double span = j + 1 < b.times.size() ? b.times[j + 1] - b.times[j] : 0.0;
    const double w = span > 0 ? std::clamp((t - b.times[j]) / span, 0.0, 1.0) : 0.0;
    for (std::size_t i = 0; i < a.grid.n_points; ++i) {
      bchi[i] = (1 - w) * s0.chi[i] + w * s1.chi[i];
      btheta[i] = (1 - w) * s0.delta_theta[i] + w * s1.delta_theta[i];
    }
    double mc = 0, lc = 0, mt = 0, lt = 0;
    const auto& sa = a.snapshots[k];
    for (std::size_t i = 0; i < a.grid.n_points; ++i) {
      const double dc = std::abs(sa.chi[i] - bchi[i]);
      const double dth = std::abs(sa.delta_theta[i] - btheta[i]);
      mc = std::max(mc, dc);
      mt = std::max(mt, dth);
      lc += dc * dc;
      lt += dth * dth;
    }
    d.times.push_back(a.times[k]);
    d.max_chi.push_back(mc);
    d.max_theta.push_back(mt);
    d.l2_chi.push_back(std::sqrt(lc * a.grid.dxi));
    d.l2_theta.push_back(std::sqrt(lt * a.grid.dxi));
    d.summary = std::max(d.summary, d.l2_chi.back());
  }
  if (d.times.empty()) throw DomainError("wave fields share no common time span");
  return d;
}

namespace {

nlohmann::ordered_json velocity_json(const std::optional<VelocityEstimate>& v) {
  if (!v) return nullptr;
  return {{"velocity_miles_per_s", v->velocity}, {"r2", v->r2}, {"points", v->points}};
}

}  // namespace

std::string arrival_json(const ArrivalCurve& curve) {
  nlohmann::ordered_json j;
  j["threshold_frac"] = curve.threshold_frac;
  j["reference_chi"] = curve.reference;
  j["xi_miles"] = curve.xi;
  auto& arr = j["arrival_t"] = nlohmann::ordered_json::array();
  for (const auto& a : curve.arrival_t) arr.push_back(a ? nlohmann::ordered_json(*a) : nlohmann::ordered_json(nullptr));
  return j.dump(2) + "\n";
}

std::string analysis_json(const ArrivalCurve& curve, const std::vector<std::optional<VelocityEstimate>>& seg_v,
                          const std::optional<VelocityEstimate>& overall, const std::vector<double>& profile,
                          const ContinuumGrid& grid) {
  nlohmann::ordered_json j;
  j["threshold_frac"] = curve.threshold_frac;
  j["detected_points"] = curve.detected();
  j["velocity"] = velocity_json(overall);
  const auto peaks = segment_mean_peaks(profile, grid);
  auto& segs = j["segments"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < grid.segments.size(); ++k) {
    const auto& s = grid.segments[k];
    segs.push_back({{"from_bus", s.from_bus},
                    {"to_bus", s.to_bus},
                    {"xi_begin", grid.xi[s.begin]},
                    {"xi_end", grid.xi[s.end]},
                    {"nu", s.nu},
                    {"velocity", velocity_json(seg_v[k])},
                    {"mean_peak_chi", peaks[k]}});
  }
  j["peak_chi"] = profile;
  return j.dump(2) + "\n";
}

std::string divergence_json(const ModelDivergence& d) {
  nlohmann::ordered_json j;
  j["summary_l2_chi"] = d.summary;
  j["times"] = d.times;
  j["max_chi"] = d.max_chi;
  j["l2_chi"] = d.l2_chi;
  j["max_theta"] = d.max_theta;
  j["l2_theta"] = d.l2_theta;
  return j.dump(2) + "\n";
}

std::string analysis_text(const ContinuumGrid& grid, const std::vector<std::optional<VelocityEstimate>>& seg_v,
                          const std::vector<double>& seg_peaks) {
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-10s %10s %10s %14s %14s %8s %14s\n", "segment", "xi_from", "xi_to", "nu",
                "v_measured", "r2", "mean_peak_chi");
  os << buf;
  for (std::size_t k = 0; k < grid.segments.size(); ++k) {
    const auto& s = grid.segments[k];
    const std::string name = std::to_string(s.from_bus) + "-" + std::to_string(s.to_bus);
    if (seg_v[k]) {
      std::snprintf(buf, sizeof buf, "%-10s %10.3f %10.3f %14.6g %14.6g %8.4f %14.6g\n", name.c_str(),
                    grid.xi[s.begin], grid.xi[s.end], s.nu, seg_v[k]->velocity, seg_v[k]->r2, seg_peaks[k]);
    } else {
      std::snprintf(buf, sizeof buf, "%-10s %10.3f %10.3f %14.6g %14s %8s %14.6g\n", name.c_str(), grid.xi[s.begin],
                    grid.xi[s.end], s.nu, "-", "-", seg_peaks[k]);
    }
    os << buf;
  }
  return os.str();
}

}  // namespace emw
