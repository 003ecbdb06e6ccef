#include "fkfp/solver/solver.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "fkfp/core/fft.hpp"
#include "fkfp/core/shift.hpp"
#include "fkfp/core/symbols.hpp"
#include "fkfp/simd/kernels.hpp"

namespace fkfp::solver {

// ---- TimeGrid ---------------------------------------------------------------

TimeGrid TimeGrid::dyadic(double T, int K) {
  TimeGrid tg;
  tg.horizon = T;
  for (int k = K - 1; k >= 0; --k) tg.times.push_back(T * std::exp2(static_cast<double>(-k)));
  tg.validate();
  return tg;
}

TimeGrid TimeGrid::uniform(double T, int K) {
  TimeGrid tg;
  tg.horizon = T;
  for (int k = 1; k <= K; ++k) tg.times.push_back(T * k / K);
  tg.validate();
  return tg;
}

void TimeGrid::validate() const {
  if (times.empty()) throw std::invalid_argument("time_grid.times: empty");
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw std::invalid_argument("time_grid.times: must be strictly increasing and positive");
    prev = t;
  }
  if (std::fabs(times.back() - horizon) > 1e-12 * horizon)
    throw std::invalid_argument("time_grid.times: last sample must equal the horizon");
  if (grade_p < 2) throw std::invalid_argument("time_grid.grade_p: must be >= 2");
  if (duhamel_j < 2) throw std::invalid_argument("time_grid.duhamel_j: must be >= 2");
}

void graded_nodes(double a, double b, int J, int p, std::vector<double>* nodes,
                  std::vector<double>* weights) {
  nodes->clear();
  weights->clear();
  const double len = b - a;
  const double gl = 0.5 / std::sqrt(3.0);  // 2-point Gauss-Legendre offsets
  double s_prev = a;
  for (int j = 1; j <= J; ++j) {
    const double u = 1.0 - std::pow(1.0 - static_cast<double>(j) / J, p);
    const double s = a + len * u;
    const double mid = 0.5 * (s_prev + s), h = s - s_prev;
    nodes->push_back(mid - gl * h);
    weights->push_back(0.5 * h);
    nodes->push_back(mid + gl * h);
    weights->push_back(0.5 * h);
    s_prev = s;
  }
}

// ---- Trajectory ---------------------------------------------------------------

int Trajectory::index_of(double t, double tol) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::fabs(times[i] - t) <= tol * std::fmax(1.0, std::fabs(t))) return static_cast<int>(i);
  return -1;
}

std::vector<norms::Sample> Trajectory::samples() const {
  std::vector<norms::Sample> s;
  for (std::size_t i = 0; i < times.size(); ++i) s.push_back({times[i], &spectra[i]});
  return s;
}

// ---- PropagatorCache ------------------------------------------------------------

PropagatorCache::PropagatorCache(GridPtr grid, const Params& p, std::size_t cap_mb)
    : grid_(std::move(grid)), p_(p) {
  const std::size_t bytes_per = grid_->size() * sizeof(float);
  cap_entries_ = bytes_per ? std::max<std::size_t>(1, cap_mb * (1u << 20) / bytes_per) : 1;
}

void PropagatorCache::get(double s, std::vector<double>& out) {
  const std::uint64_t key = std::bit_cast<std::uint64_t>(s);
  out.resize(grid_->size());
  auto it = map_.find(key);
  if (it == map_.end()) {
    const auto sym = propagator_symbol(s, *grid_, p_);
    std::vector<float> f(sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i) f[i] = static_cast<float>(sym[i]);
    if (map_.size() >= cap_entries_ && !fifo_.empty()) {
      map_.erase(fifo_.front());
      fifo_.pop_front();
    }
    it = map_.emplace(key, std::move(f)).first;
    fifo_.push_back(key);
  }
  const std::vector<float>& f = it->second;
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = static_cast<double>(f[i]);
}

void PropagatorCache::clear() {
  map_.clear();
  fifo_.clear();
}

// ---- linear flow -------------------------------------------------------------------

namespace {

// multiply by e^{-psi(t)}, undo the shear: v-inverse, characteristic phase,
// v-forward (with the v-axis normalization)
void shear_shift_spec(std::vector<cplx>& c, const TorusGrid& g, double t) {
  fft_v_axes(c, g, true);
  characteristic_phase(c, g, t);
  fft_v_axes(c, g, false);
  double nv_total = 1.0;
  for (int a = g.dim(); a < g.n_axes(); ++a) nv_total *= g.len(a);
  simd::backend().vd_scale(reinterpret_cast<double*>(c.data()),
                           reinterpret_cast<const double*>(c.data()), 1.0 / nv_total,
                           2 * c.size());
}

}  // namespace

SpectralField linear_evolve_spec(const SpectralField& f0hat, double t, const Params& p) {
  if (t < 0.0) throw std::invalid_argument("linear_evolve: t must be >= 0");
  SpectralField out = f0hat;
  if (t == 0.0) return out;
  apply_multiplier(out, propagator_symbol(t, *out.grid, p));
  shear_shift_spec(out.c, *out.grid, t);
  return out;
}

PhaseField linear_evolve(const PhaseField& f0, double t, const Params& p) {
  if (t == 0.0) return f0;
  return to_physical(linear_evolve_spec(to_spectral(f0), t, p));
}

Trajectory linear_trajectory(const PhaseField& f0, const TimeGrid& tg, const Params& p) {
  Trajectory tr;
  tr.grid = f0.grid;
  tr.params = p;
  tr.provenance = "linear";
  SpectralField f0hat = to_spectral(f0);
  tr.times.push_back(0.0);
  tr.fields.push_back(f0);
  tr.spectra.push_back(f0hat);
  for (double t : tg.times) {
    SpectralField s = linear_evolve_spec(f0hat, t, p);
    tr.fields.push_back(to_physical(s));
    tr.spectra.push_back(std::move(s));
    tr.times.push_back(t);
  }
  for (const auto& f : tr.fields) tr.mass.push_back(cell_sum(f));
  return tr;
}

PhaseField fourier_ode_oracle(const PhaseField& f0, double t, int steps, const Params& p) {
  if (steps < 16) throw std::invalid_argument("fourier_ode_oracle: steps must be >= 16");
  SpectralField s = to_spectral(f0);
  if (t == 0.0) return to_physical(s);
  const TorusGrid& g = *s.grid;
  const double h = t / steps;
  std::vector<double> rho(g.size());
  for_each_mode(g, [&](std::size_t flat, const int*, const double* xi, const double* eta) {
    auto rate = [&](double sig) {
      double q = 0.0;
      for (int c = 0; c < g.dim(); ++c) {
        const double u = eta[c] - sig * xi[c];
        q += u * u;
      }
      return std::pow(q, 0.5 * p.alpha);
    };
    double y = 1.0;
    for (int n = 0; n < steps; ++n) {
      const double s0 = n * h;
      const double r1 = rate(s0), r2 = rate(s0 + 0.5 * h), r4 = rate(s0 + h);
      const double k1 = -r1 * y;
      const double k2 = -r2 * (y + 0.5 * h * k1);
      const double k3 = -r2 * (y + 0.5 * h * k2);
      const double k4 = -r4 * (y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    rho[flat] = y;
  });
  apply_multiplier(s, rho);
  shear_shift_spec(s.c, g, t);
  return to_physical(s);
}

// ---- nonlinearity -----------------------------------------------------------------

std::vector<SpectralField> nonlinearity(const SpectralField& ghat, const Params& p) {
  const TorusGrid& g = *ghat.grid;
  SpectralField gm = ghat;
  dealias_23(gm);
  PhaseField gphys = to_physical(gm);
  std::vector<SpectralField> comps;
  for (int c = 0; c < g.dim(); ++c) {
    SpectralField w = gm;
    apply_imag_multiplier(w, frac_grad_inv_symbol(g, p, c));
    PhaseField wphys = to_physical(w);
    PhaseField prod(ghat.grid);
    simd::backend().vd_mul(prod.v.data(), gphys.v.data(), wphys.v.data(), prod.v.size());
    SpectralField Fc = to_spectral(prod);
    dealias_23(Fc);
    comps.push_back(std::move(Fc));
  }
  return comps;
}

std::vector<SpectralField> nonlinearity(const PhaseField& g, const Params& p) {
  return nonlinearity(to_spectral(g), p);
}

// ---- Duhamel ---------------------------------------------------------------------

ForceEval make_lerp_force(const ForceTrajectory& F) {
  if (F.times.empty() || F.times.front() != 0.0)
    throw std::invalid_argument("force trajectory must start at t = 0");
  return [&F](double tau, std::vector<SpectralField>& out) {
    const auto& ts = F.times;
    std::size_t k = 1;
    while (k < ts.size() && ts[k] < tau) ++k;
    if (k >= ts.size()) k = ts.size() - 1;
    const double t0 = ts[k - 1], t1 = ts[k];
    const double th = (tau - t0) / (t1 - t0);
    out.clear();
    for (std::size_t c = 0; c < F.comps[k].size(); ++c) {
      SpectralField s = F.comps[k - 1][c];
      scale(s, 1.0 - th);
      add_scaled(s, F.comps[k][c], th);
      out.push_back(std::move(s));
    }
  };
}

namespace {

// accumulate the interval integral int_a^b U(t_target - tau) div F(tau) dtau
// in the mixed (xi, v) domain
void accumulate_interval(const ForceEval& force, double a, double b, double t_target,
                         const TimeGrid& tg, const TorusGrid& g, const Params& p,
                         PropagatorCache* cache, std::vector<cplx>& acc_mixed,
                         const std::vector<std::vector<double>>& eta_tables) {
  std::vector<double> nodes, weights;
  graded_nodes(a, b, tg.duhamel_j, tg.grade_p, &nodes, &weights);
  std::vector<SpectralField> F;
  std::vector<double> sym;
  std::vector<cplx> mixed(g.size());
  const auto& k = simd::backend();
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double tau = nodes[q], w = weights[q], s = t_target - tau;
    force(tau, F);
    // divergence in spectral form: sum_c (i eta_c) F_c
    std::fill(mixed.begin(), mixed.end(), cplx{});
    for (int c = 0; c < g.dim(); ++c) {
      SpectralField tmp = F[c];
      apply_imag_multiplier(tmp, eta_tables[c]);
      k.vz_axpy_real(mixed.data(), tmp.c.data(), 1.0, mixed.size());
    }
    if (cache) {
      cache->get(s, sym);
    } else {
      sym = propagator_symbol(s, g, p);
    }
    k.vz_scale_real(mixed.data(), mixed.data(), sym.data(), mixed.size());
    fft_v_axes(mixed, g, true);
    characteristic_phase(mixed, g, s);
    k.vz_axpy_real(acc_mixed.data(), mixed.data(), w, acc_mixed.size());
  }
}

std::vector<std::vector<double>> make_eta_tables(const TorusGrid& g) {
  std::vector<std::vector<double>> tabs;
  for (int c = 0; c < g.dim(); ++c) {
    tabs.push_back(build_real_symbol(g, [&](const int* idx, const double*, const double* eta) {
      // odd symbol: zero the unpaired v-Nyquist rows
      for (int a = g.dim(); a < g.n_axes(); ++a)
        if (g.nyquist(a, idx[a])) return 0.0;
      return eta[c];
    }));
  }
  return tabs;
}

void mixed_to_spec(std::vector<cplx>& c, const TorusGrid& g) {
  fft_v_axes(c, g, false);
  double nv_total = 1.0;
  for (int a = g.dim(); a < g.n_axes(); ++a) nv_total *= g.len(a);
  simd::backend().vd_scale(reinterpret_cast<double*>(c.data()),
                           reinterpret_cast<const double*>(c.data()), 1.0 / nv_total,
                           2 * c.size());
}

void evolve_spec_cached(SpectralField& f, double dt, const Params& p, PropagatorCache* cache,
                        std::vector<double>& scratch) {
  if (dt == 0.0) return;
  if (cache) {
    cache->get(dt, scratch);
    apply_multiplier(f, scratch);
  } else {
    apply_multiplier(f, propagator_symbol(dt, *f.grid, p));
  }
  shear_shift_spec(f.c, *f.grid, dt);
}

}  // namespace

std::vector<SpectralField> duhamel_march(const ForceEval& force, const TimeGrid& tg, GridPtr grid,
                                         const Params& p, PropagatorCache* cache) {
  const TorusGrid& g = *grid;
  auto eta_tables = make_eta_tables(g);
  std::vector<SpectralField> out;
  SpectralField acc(grid);
  std::vector<double> scratch;
  double prev = 0.0;
  for (double t : tg.times) {
    // exact semigroup step of the accumulated integral
    evolve_spec_cached(acc, t - prev, p, cache, scratch);
    std::vector<cplx> mixed(g.size(), cplx{});
    accumulate_interval(force, prev, t, t, tg, g, p, cache, mixed, eta_tables);
    mixed_to_spec(mixed, g);
    simd::backend().vz_axpy_real(acc.c.data(), mixed.data(), 1.0, acc.c.size());
    out.push_back(acc);
    prev = t;
  }
  return out;
}

SpectralField duhamel_apply(const ForceTrajectory& F, double t, const TimeGrid& tg,
                            const Params& p, PropagatorCache* cache) {
  if (F.comps.empty() || F.comps[0].empty()) throw std::invalid_argument("duhamel_apply: empty force");
  GridPtr grid = F.comps[0][0].grid;
  int kidx = -1;
  for (std::size_t i = 0; i < tg.times.size(); ++i)
    if (std::fabs(tg.times[i] - t) <= 1e-12 * std::fmax(1.0, t)) kidx = static_cast<int>(i);
  if (kidx < 0) throw std::invalid_argument("duhamel_apply: t must be one of the sample times");
  TimeGrid sub = tg;
  sub.times.assign(tg.times.begin(), tg.times.begin() + kidx + 1);
  sub.horizon = sub.times.back();
  auto res = duhamel_march(make_lerp_force(F), sub, grid, p, cache);
  return res.back();
}

SpectralField duhamel_direct(const ForceEval& force, double t, const TimeGrid& tg, GridPtr grid,
                             const Params& p) {
  const TorusGrid& g = *grid;
  auto eta_tables = make_eta_tables(g);
  std::vector<cplx> mixed(g.size(), cplx{});
  // composite over the sample intervals below t, each with its own graded cells
  double prev = 0.0;
  for (double tk : tg.times) {
    if (tk > t + 1e-15) break;
    accumulate_interval(force, prev, std::fmin(tk, t), t, tg, g, p, nullptr, mixed, eta_tables);
    prev = tk;
  }
  if (prev < t - 1e-15) accumulate_interval(force, prev, t, t, tg, g, p, nullptr, mixed, eta_tables);
  mixed_to_spec(mixed, g);
  SpectralField out(grid);
  out.c = std::move(mixed);
  return out;
}

// ---- Picard -------------------------------------------------------------------------

namespace {

ForceTrajectory force_of(const Trajectory& tr, const Params& p) {
  ForceTrajectory F;
  F.times = tr.times;
  for (const auto& s : tr.spectra) F.comps.push_back(nonlinearity(s, p));
  return F;
}

bool finite_sup(const Trajectory& tr, double* sup) {
  double m = 0.0;
  for (const auto& f : tr.fields) m = std::fmax(m, sup_norm(f));
  *sup = m;
  return std::isfinite(m);
}

}  // namespace

Trajectory apply_s(const PhaseField& f0, const Trajectory& g, const TimeGrid& tg, const Params& p,
                   PropagatorCache* cache) {
  Trajectory hl = linear_trajectory(f0, tg, p);
  ForceTrajectory F = force_of(g, p);
  auto hn = duhamel_march(make_lerp_force(F), tg, f0.grid, p, cache);
  Trajectory out = hl;
  out.provenance = "picard-map";
  for (std::size_t k = 0; k < tg.times.size(); ++k) {
    add_scaled(out.spectra[k + 1], hn[k], 1.0);
    out.fields[k + 1] = to_physical(out.spectra[k + 1]);
    out.mass[k + 1] = cell_sum(out.fields[k + 1]);
  }
  return out;
}

std::pair<Trajectory, PicardDiagnostics> picard_solve(const PhaseField& f0, const TimeGrid& tg,
                                                      const Params& p, const PicardOptions& opt) {
  tg.validate();
  p.validate();
  PicardDiagnostics diag;
  PropagatorCache cache(f0.grid, p, opt.cache_mb);

  SpectralField f0hat = to_spectral(f0);
  if (!opt.sup_norm_stopping) {
    diag.seed_norm_value = norms::seed_norm(f0hat, p, opt.norm_cfg);
    diag.seed_norm_warning = diag.seed_norm_value > opt.smallness_sigma;
  }

  Trajectory hl = linear_trajectory(f0, tg, p);
  Trajectory h = hl;
  h.provenance = "picard-iterate-0";

  const std::size_t K = tg.times.size();
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    ForceTrajectory F = force_of(h, p);
    auto hn = duhamel_march(make_lerp_force(F), tg, f0.grid, p, &cache);

    Trajectory hnew = hl;
    hnew.provenance = "picard-iterate-" + std::to_string(iter);
    for (std::size_t k = 0; k < K; ++k) {
      add_scaled(hnew.spectra[k + 1], hn[k], 1.0);
      hnew.fields[k + 1] = to_physical(hnew.spectra[k + 1]);
      hnew.mass[k + 1] = cell_sum(hnew.fields[k + 1]);
    }

    double supv = 0.0;
    if (!finite_sup(hnew, &supv)) {
      diag.aborted_nonfinite = true;
      diag.iterations = iter;
      return {h, diag};
    }

    // increment trajectory h_new - h
    double inc = 0.0;
    if (opt.sup_norm_stopping) {
      for (std::size_t k = 0; k < hnew.fields.size(); ++k)
        inc = std::fmax(inc, sup_norm(difference(hnew.fields[k], h.fields[k])));
    } else {
      Trajectory dtr = hnew;
      for (std::size_t k = 0; k < dtr.spectra.size(); ++k) {
        add_scaled(dtr.spectra[k], h.spectra[k], -1.0);
        dtr.fields[k] = to_physical(dtr.spectra[k]);
      }
      inc = norms::x_norm(dtr.samples(), p, opt.norm_cfg);
    }
    if (!diag.increments.empty() && diag.increments.back() > 0.0)
      diag.ratios.push_back(inc / diag.increments.back());
    diag.increments.push_back(inc);
    h = std::move(hnew);
    diag.iterations = iter;
    if (inc <= opt.tol) {
      diag.converged = true;
      break;
    }
  }
  if (!diag.ratios.empty()) {
    bool contracting = true;
    for (double r : diag.ratios) contracting = contracting && (r < 1.0);
    if (!contracting) diag.converged = false;
  }

  // mild-equation residual with the converged trajectory
  {
    ForceTrajectory F = force_of(h, p);
    auto hn = duhamel_march(make_lerp_force(F), tg, f0.grid, p, &cache);
    double res = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      SpectralField r = hl.spectra[k + 1];
      add_scaled(r, hn[k], 1.0);
      add_scaled(r, h.spectra[k + 1], -1.0);
      res = std::fmax(res, sup_norm(to_physical(r)));
    }
    diag.residual_sup = res;

    if (opt.estimate_quadrature_error) {
      TimeGrid coarse = tg;
      coarse.duhamel_j = std::max(2, tg.duhamel_j / 2);
      auto hn2 = duhamel_march(make_lerp_force(F), coarse, f0.grid, p, nullptr);
      SpectralField d = hn.back();
      add_scaled(d, hn2.back(), -1.0);
      diag.quad_error_est = sup_norm(to_physical(d));
      diag.mesh_too_coarse = diag.quad_error_est > std::fmax(opt.tol * 100.0, 1e-8);
    }
  }
  return {h, diag};
}

// ---- splitting ---------------------------------------------------------------------

Trajectory splitting_stepper(const PhaseField& f0, double dt, int nsteps, const Params& p,
                             const std::vector<double>& sample_times, const SplitOptions& opt) {
  if (!(dt > 0.0) || nsteps < 1) throw std::invalid_argument("splitting: bad dt/nsteps");
  const TorusGrid& g = *f0.grid;

  Trajectory tr;
  tr.grid = f0.grid;
  tr.params = p;
  tr.provenance = "splitting";
  tr.times.push_back(0.0);
  tr.fields.push_back(f0);
  tr.spectra.push_back(to_spectral(f0));
  tr.mass.push_back(cell_sum(f0));

  // exact fractional-diffusion multiplier for one step
  std::vector<double> diff = build_real_symbol(g, [&](const int*, const double*, const double* eta) {
    double e2 = 0.0;
    for (int c = 0; c < g.dim(); ++c) e2 += eta[c] * eta[c];
    return std::exp(-dt * (e2 == 0.0 ? 0.0 : std::pow(e2, 0.5 * p.alpha)));
  });

  auto transport = [&](SpectralField& s, double tau) {
    fft_v_axes(s.c, g, true);
    characteristic_phase(s.c, g, tau);
    fft_v_axes(s.c, g, false);
    double nv_total = 1.0;
    for (int a = g.dim(); a < g.n_axes(); ++a) nv_total *= g.len(a);
    scale(s, 1.0 / nv_total);
  };

  const auto eta_tabs = make_eta_tables(g);
  auto div_force = [&](const SpectralField& s) {
    SpectralField out(s.grid);
    if (!opt.nonlinear) return out;
    auto F = nonlinearity(s, p);
    for (int c = 0; c < g.dim(); ++c) {
      SpectralField tmp = F[c];
      apply_imag_multiplier(tmp, eta_tabs[c]);
      add_scaled(out, tmp, 1.0);
    }
    return out;
  };

  const double sup0 = sup_norm(f0);
  // drift stability indicator recorded for diagnostics (explicit RK2 substep)
  {
    double eta_max = 0.0;
    for (int a = g.dim(); a < g.n_axes(); ++a)
      eta_max = std::fmax(eta_max, M_PI * g.len(a) / g.box(a));
    tr.diagnostics["drift_cfl"] = dt * std::pow(eta_max, 1.0 - p.beta) * std::fmax(sup0, 1e-300);
  }

  SpectralField s = tr.spectra.front();
  double t = 0.0;
  for (int n = 0; n < nsteps; ++n) {
    transport(s, 0.5 * dt);
    // Lawson-RK2 for d/dt f = -L_v^alpha f + div_v F[f]
    SpectralField k1 = div_force(s);
    SpectralField fa = s;
    add_scaled(fa, k1, dt);
    apply_multiplier(fa, diff);
    SpectralField k2 = div_force(fa);
    add_scaled(s, k1, 0.5 * dt);
    apply_multiplier(s, diff);
    add_scaled(s, k2, 0.5 * dt);
    transport(s, 0.5 * dt);
    t = (n + 1) * dt;

    PhaseField phys = to_physical(s);
    const double supn = sup_norm(phys);
    if (!std::isfinite(supn) || supn > opt.blowup_factor * std::fmax(sup0, 1e-300))
      throw std::runtime_error("splitting_stepper: instability detected (sup-norm growth)");

    for (double ts : sample_times) {
      if (std::fabs(ts - t) <= 1e-9 * std::fmax(1.0, ts)) {
        tr.times.push_back(t);
        tr.fields.push_back(phys);
        tr.spectra.push_back(s);
        tr.mass.push_back(cell_sum(phys));
      }
    }
  }
  return tr;
}

}  // namespace fkfp::solver
