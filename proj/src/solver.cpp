#include "emw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "emw/error.hpp"
#include "emw/kernels.hpp"

namespace emw {

void check_config(const SolverConfig& cfg) {
  if (!(cfg.courant > 0)) throw DomainError("courant must be > 0");
  if (!(cfg.t_end > 0) || !std::isfinite(cfg.t_end)) throw DomainError("t_end must be a positive finite time");
  if (cfg.record_stride == 0) throw DomainError("record_stride must be >= 1");
  if (cfg.record_dt < 0 || !std::isfinite(cfg.record_dt)) throw DomainError("record_dt must be >= 0");
  if (!(cfg.dxi > 0)) throw DomainError("dxi must be > 0");
  if (cfg.dt < 0 || !std::isfinite(cfg.dt)) throw DomainError("dt must be >= 0");
  if (!(cfg.blowup_factor > 1)) throw DomainError("blowup_factor must be > 1");
}

double cfl_timestep(const ContinuumGrid& grid, const std::vector<double>& v, double courant) {
  if (!(courant > 0)) throw DomainError("courant must be > 0");
  if (v.size() != grid.n_points) throw DomainError("voltage field length does not match the grid");
  double vmax = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) vmax = std::max(vmax, grid.nu[i] * std::abs(v[i]));
  if (!(vmax > 0)) throw DomainError("maximum wave speed is zero");
  return courant * grid.dxi / vmax;
}

namespace {

// Riemann invariants chi + V lam (right-going) and chi - V lam (left-going)
// traced back to the foot of the characteristic and interpolated linearly.
double incoming_right(const std::vector<double>& chi, const std::vector<double>& lam, const std::vector<double>& v,
                      std::size_t end, double lam_end, double courant_local) {
  const double r_end = chi[end] + v[end] * lam_end;
  const double r_in = chi[end - 1] + v[end - 1] * lam[end - 1];
  return (1 - courant_local) * r_end + courant_local * r_in;
}

double incoming_left(const std::vector<double>& chi, const std::vector<double>& lam, const std::vector<double>& v,
                     std::size_t begin, double lam_in, double courant_local) {
  const double r_beg = chi[begin] - v[begin] * lam[begin];
  const double r_in = chi[begin + 1] - v[begin + 1] * lam_in;
  return (1 - courant_local) * r_beg + courant_local * r_in;
}

}  // namespace

FieldState step_emw(const FieldState& s, const ContinuumGrid& grid, const BoundaryValues& bc, double dt,
                    const SolverConfig& cfg, std::size_t step) {
  const std::size_t n = grid.n_points;
  if (s.size() != n) throw DomainError("field state does not match the grid");
  const bool hom = cfg.model == Model::homogeneous;
  const std::size_t nseg = grid.segments.size();
  if (bc.bus_v.size() != nseg + 1) throw DomainError("boundary values need one voltage per bus marker");
  if (nseg > 1 && bc.junction_jump.size() != nseg - 1) {
    throw DomainError("boundary values need one jump per junction");
  }

  std::vector<double> v_old = hom ? std::vector<double>(n, 1.0) : s.v;
  std::vector<double> v_new = hom ? std::vector<double>(n, 1.0) : voltage_from_buses(grid, bc.bus_v);
  const double r = dt / grid.dxi;

  FieldState out = s;
  out.time = s.time + dt;
  out.v = v_new;

  // Right-going invariant arriving at each segment end, left-going at each start.
  std::vector<double> r_plus(nseg), r_minus(nseg);
  std::vector<double> lam_loc, chi_loc, a, c, lam_out, chi_out;
  for (std::size_t k = 0; k < nseg; ++k) {
    const auto& seg = grid.segments[k];
    const std::size_t m = seg.points();
    lam_loc.assign(s.lam.begin() + static_cast<long>(seg.begin), s.lam.begin() + static_cast<long>(seg.end) + 1);
    lam_loc.back() = s.lam_left[seg.end];
    chi_loc.assign(s.chi.begin() + static_cast<long>(seg.begin), s.chi.begin() + static_cast<long>(seg.end) + 1);
    a.assign(m, seg.nu);
    c.resize(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = seg.nu * v_old[seg.begin + j] * v_old[seg.begin + j];
    lam_out = lam_loc;
    chi_out = chi_loc;
    EmwKernelArgs args{m, lam_loc.data(), chi_loc.data(), a.data(), c.data(), r, lam_out.data(), chi_out.data()};
    if (cfg.parallel) {
      omp::richtmyer_emw(args);
    } else {
      serial::richtmyer_emw(args);
    }
    for (std::size_t j = 1; j + 1 < m; ++j) {
      out.lam[seg.begin + j] = lam_out[j];
      out.lam_left[seg.begin + j] = lam_out[j];
      out.chi[seg.begin + j] = chi_out[j];
    }
    const double cl_end = seg.nu * v_old[seg.end] * r;
    const double cl_beg = seg.nu * v_old[seg.begin] * r;
    r_plus[k] = incoming_right(s.chi, s.lam, v_old, seg.end, s.lam_left[seg.end], cl_end);
    r_minus[k] = incoming_left(s.chi, s.lam, v_old, seg.begin,
                               seg.begin + 1 == seg.end ? s.lam_left[seg.end] : s.lam[seg.begin + 1], cl_beg);
  }

  const bool fict = cfg.boundary_mode == BoundaryMode::fictitious;

  // Source end: prescribed flux.
  {
    const auto& seg = grid.segments.front();
    const std::size_t i = 0;
    const double vv = v_new[i];
    const double z = seg.b * vv / seg.nu;
    const double vlam = bc.p_source / z;
    out.lam[i] = out.lam_left[i] = vlam / vv;
    out.chi[i] = fict ? 2 * out.chi[1] - out.chi[2] : r_minus.front() + vlam;
  }

  // Junctions: continuous chi, P_out - P_in = jump.
  for (std::size_t k = 0; k + 1 < nseg; ++k) {
    const auto& sa = grid.segments[k];
    const auto& sb = grid.segments[k + 1];
    const std::size_t i = sa.end;
    const double vv = v_new[i];
    const double za = sa.b * vv / sa.nu;
    const double zb = sb.b * vv / sb.nu;
    const double chi_j = (za * r_plus[k] + zb * r_minus[k + 1] + bc.junction_jump[k]) / (za + zb);
    out.chi[i] = chi_j;
    out.lam_left[i] = (r_plus[k] - chi_j) / vv;
    out.lam[i] = (chi_j - r_minus[k + 1]) / vv;
  }

  // Far end.
  {
    const auto& seg = grid.segments.back();
    const std::size_t i = n - 1;
    const double vv = v_new[i];
    const double z = seg.b * vv / seg.nu;
    const double rp = r_plus.back();
    double chi_f = 0.0, vlam = 0.0;
    if (fict) {
      const double lam_x = 2 * out.lam[i - 1] - out.lam[i - 2];
      const double chi_x = 2 * out.chi[i - 1] - out.chi[i - 2];
      switch (cfg.far_end) {
        case FarEnd::absorbing: chi_f = chi_x; vlam = vv * lam_x; break;
        case FarEnd::fixed_angle: chi_f = 0.0; vlam = vv * lam_x; break;
        case FarEnd::fixed_power: chi_f = chi_x; vlam = bc.p_far / z; break;
      }
    } else {
      switch (cfg.far_end) {
        case FarEnd::absorbing: chi_f = 0.5 * rp; vlam = 0.5 * rp; break;
        case FarEnd::fixed_angle: chi_f = 0.0; vlam = rp; break;
        case FarEnd::fixed_power: vlam = bc.p_far / z; chi_f = rp - vlam; break;
      }
    }
    out.chi[i] = chi_f;
    out.lam[i] = out.lam_left[i] = vlam / vv;
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.gamma[i] = v_new[i] * v_new[i] * out.lam[i];
    out.delta_theta[i] = s.delta_theta[i] + 0.5 * dt * (s.chi[i] + out.chi[i]);
    if (!std::isfinite(out.chi[i]) || !std::isfinite(out.lam[i]) || !std::isfinite(out.lam_left[i]) ||
        !std::isfinite(out.delta_theta[i])) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "non-finite field value at step %zu, grid index %zu (xi = %.3f miles)", step, i,
                    grid.xi[i]);
      throw InstabilityError(buf, step, i);
    }
  }
  return out;
}

EmwIntegrator::EmwIntegrator(ContinuumGrid grid, SolverConfig cfg, BoundarySchedule schedule)
    : grid_(std::move(grid)), cfg_(cfg), schedule_(std::move(schedule)) {
  check_config(cfg_);
  if (!schedule_) throw DomainError("integrator needs a boundary schedule");
  state_ = zero_state(grid_);
  if (cfg_.model == Model::nonhomogeneous) state_.v = voltage_from_buses(grid_, schedule_(0.0).bus_v);
}

void EmwIntegrator::set_initial(FieldState s) {
  if (s.size() != grid_.n_points) throw DomainError("initial state does not match the grid");
  if (cfg_.model == Model::homogeneous) s.v.assign(grid_.n_points, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) s.gamma[i] = s.v[i] * s.v[i] * s.lam[i];
  state_ = std::move(s);
}

WaveField EmwIntegrator::run() {
  const double dt_cfl = cfl_timestep(grid_, state_.v, cfg_.courant);
  std::size_t nsteps = 0;
  if (cfg_.dt > 0) {
    dt_ = cfg_.dt;
    nsteps = static_cast<std::size_t>(std::ceil(cfg_.t_end / dt_ - 1e-9));
  } else {
    nsteps = static_cast<std::size_t>(std::ceil(cfg_.t_end / dt_cfl));
    dt_ = cfg_.t_end / static_cast<double>(nsteps);
  }
  total_steps_ = nsteps;
  std::size_t stride = cfg_.record_stride;
  if (cfg_.record_dt > 0) stride = std::max(stride, static_cast<std::size_t>(std::floor(cfg_.record_dt / dt_)));

  WaveField w;
  w.grid = grid_;
  w.dt = dt_;
  const double t0 = state_.time;
  w.times.push_back(t0);
  w.snapshots.push_back(state_);

  auto z_at = [&](std::size_t seg, double vv) {
    const auto& s = grid_.segments[seg];
    return s.b * vv / s.nu;
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < state_.size(); ++i) {
    scale = std::max({scale, std::abs(state_.chi[i]), std::abs(state_.v[i] * state_.lam[i])});
  }

  for (std::size_t k = 1; k <= nsteps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt_;
    const BoundaryValues bc = schedule_(t);
    const double v0 = cfg_.model == Model::homogeneous ? 1.0 : bc.bus_v.front();
    const double vf = cfg_.model == Model::homogeneous ? 1.0 : bc.bus_v.back();
    scale = std::max(scale, std::abs(bc.p_source) / z_at(0, v0));
    scale = std::max(scale, std::abs(bc.p_far) / z_at(grid_.segments.size() - 1, vf));
    for (std::size_t j = 0; j < bc.junction_jump.size(); ++j) {
      scale = std::max(scale, std::abs(bc.junction_jump[j]) / z_at(j + 1, 1.0));
    }

    FieldState next = step_emw(state_, grid_, bc, dt_, cfg_, k);
    next.time = t;
    state_ = std::move(next);

    if (scale > 0) {
      std::size_t imax = 0;
      double cmax = 0.0;
      for (std::size_t i = 0; i < state_.size(); ++i) {
        if (std::abs(state_.chi[i]) > cmax) {
          cmax = std::abs(state_.chi[i]);
          imax = i;
        }
      }
      if (cmax > cfg_.blowup_factor * scale) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "solution blew up at step %zu, grid index %zu: max|chi| = %.3e exceeds %.0e x forced scale %.3e",
                      k, imax, cmax, cfg_.blowup_factor, scale);
        throw InstabilityError(buf, k, imax);
      }
    }
    if (k % stride == 0 || k == nsteps) {
      w.times.push_back(state_.time);
      w.snapshots.push_back(state_);
    }
  }
  w.steps = nsteps;
  return w;
}

std::string to_string(Model m) { return m == Model::homogeneous ? "homogeneous" : "nonhomogeneous"; }

std::string to_string(BoundaryMode m) { return m == BoundaryMode::characteristic ? "characteristic" : "fictitious"; }

std::string to_string(FarEnd f) {
  switch (f) {
    case FarEnd::absorbing: return "absorbing";
    case FarEnd::fixed_angle: return "fixed_angle";
    case FarEnd::fixed_power: return "fixed_power";
  }
  return "absorbing";
}

Model parse_model(const std::string& s) {
  if (s == "hom" || s == "homogeneous") return Model::homogeneous;
  if (s == "nonhom" || s == "nonhomogeneous") return Model::nonhomogeneous;
  throw DomainError("unknown model '" + s + "' (expected hom or nonhom)");
}

BoundaryMode parse_boundary_mode(const std::string& s) {
  if (s == "characteristic") return BoundaryMode::characteristic;
  if (s == "fictitious") return BoundaryMode::fictitious;
  throw DomainError("unknown boundary mode '" + s + "' (expected characteristic or fictitious)");
}

FarEnd parse_far_end(const std::string& s) {
  if (s == "absorbing") return FarEnd::absorbing;
  if (s == "fixed_angle") return FarEnd::fixed_angle;
  if (s == "fixed_power") return FarEnd::fixed_power;
  throw DomainError("unknown far-end condition '" + s + "' (expected absorbing, fixed_angle or fixed_power)");
}

}  // namespace emw
