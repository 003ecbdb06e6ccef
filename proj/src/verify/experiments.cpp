#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fkfp/core/rng.hpp"
#include "fkfp/core/symbols.hpp"
#include "fkfp/simd/kernels.hpp"
#include "fkfp/core/threading.hpp"
#include "fkfp/lab/kernel_lab.hpp"
#include "fkfp/norms/norms.hpp"
#include "fkfp/solver/solver.hpp"
#include "fkfp/verify/verify.hpp"

namespace fkfp::verify {

using solver::PicardOptions;
using solver::TimeGrid;
using solver::Trajectory;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double sec() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::vector<double> dyadic_times(int k_lo, int k_hi) {
  std::vector<double> ts;
  for (int k = k_lo; k <= k_hi; ++k) ts.push_back(std::exp2(static_cast<double>(k)));
  return ts;
}

}  // namespace

bool VerdictReport::pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

Criterion crit_le(const std::string& name, double measured, double bound) {
  return {name, measured, bound, 0.0, "le", measured <= bound};
}
Criterion crit_ge(const std::string& name, double measured, double bound) {
  return {name, measured, bound, 0.0, "ge", measured >= bound};
}
Criterion crit_abs(const std::string& name, double measured, double target, double tol) {
  return {name, measured, target, tol, "abs_le", std::fabs(measured - target) <= tol};
}
Criterion crit_rel(const std::string& name, double measured, double target, double reltol) {
  return {name, measured, target, reltol,
          "rel_le", std::fabs(measured - target) <= reltol * std::fmax(std::fabs(target), 1e-300)};
}

// ---- 1. psi quadrature against the d=1 closed form ---------------------------

VerdictReport run_psi_oracle(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "psi-oracle";
  const Params& p = cfg.params;
  auto grid = make_grid(1, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  const auto& xis = grid->freq_table(0);
  const auto& etas = grid->freq_table(1);

  double max_rel = 0.0;
  for (double t : {0.25, 1.0, 4.0}) {
    std::vector<double> partial(xis.size(), 0.0);
    parallel_for(xis.size(), [&](std::size_t i) {
      const double xi = xis[i];
      double worst = 0.0;
      for (double eta : etas) {
        const double closed = psi_closed_d1(t, xi, eta, p.alpha);
        const double quad = psi_quadrature(t, &xi, &eta, 1, p.alpha);
        const double rel = std::fabs(quad - closed) / std::fmax(std::fabs(closed), 1e-300);
        if (closed == 0.0 && quad == 0.0) continue;
        worst = std::fmax(worst, rel);
      }
      partial[i] = worst;
    });
    for (double w : partial) max_rel = std::fmax(max_rel, w);
  }
  rep.criteria.push_back(crit_le("quadrature vs closed form, max relative error", max_rel, 1e-10));
  rep.values["max_rel_error"] = max_rel;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 2. alpha = 2 Kolmogorov Gaussian oracle ----------------------------------

VerdictReport run_kolmogorov_oracle(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "kolmogorov-oracle";
  const Params p = Params::make(2.0, cfg.params.beta, 1, cfg.params.max_deriv);
  const double L = 40.0;
  auto grid = make_grid(1, 256, 256, L, L);
  const double sx = 1.0, sv = 1.0, A = 1.0, t = 1.0;

  PhaseField f0(grid);
  for_each_mode(*grid, [&](std::size_t flat, const int* idx, const double*, const double*) {
    const double x = grid->coord_table(0)[idx[0]], v = grid->coord_table(1)[idx[1]];
    f0.v[flat] = A * std::exp(-0.5 * x * x / (sx * sx) - 0.5 * v * v / (sv * sv));
  });

  PhaseField got = solver::linear_evolve(f0, t, p);

  // exp(-psi) = exp(-(t|eta|^2 - t^2 xi.eta + t^3|xi|^2/3)) is the
  // characteristic function of the centered Gaussian with covariance
  // [[2t^3/3, -t^2], [-t^2, 2t]] in (x, v); convolve with the data Gaussian
  // and evaluate at (x - tv, v), summed over periodic images.
  const double Sxx = sx * sx + 2.0 * t * t * t / 3.0;
  const double Sxv = -t * t;
  const double Svv = sv * sv + 2.0 * t;
  const double det0 = sx * sx * sv * sv;
  const double dett = Sxx * Svv - Sxv * Sxv;
  const double A2 = A * std::sqrt(det0 / dett);
  const double i00 = Svv / dett, i01 = -Sxv / dett, i11 = Sxx / dett;

  PhaseField exact(grid);
  for_each_mode(*grid, [&](std::size_t flat, const int* idx, const double*, const double*) {
    const double x = grid->coord_table(0)[idx[0]], v = grid->coord_table(1)[idx[1]];
    double val = 0.0;
    for (int k = -2; k <= 2; ++k)
      for (int m = -2; m <= 2; ++m) {
        const double wx = x + k * L + m * L * t - t * v;
        const double wv = v + m * L;
        val += A2 * std::exp(-0.5 * (i00 * wx * wx + 2.0 * i01 * wx * wv + i11 * wv * wv));
      }
    exact.v[flat] = val;
  });

  const double rel = sup_norm(difference(got, exact)) / sup_norm(exact);
  rep.criteria.push_back(crit_le("Gaussian solution, sup-norm relative error", rel, 1e-6));
  rep.values["rel_sup_error"] = rel;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 3. mode-wise RK4 oracle + semigroup identity ------------------------------

VerdictReport run_fourier_ode_oracle(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "fourier-ode-oracle";
  const Params& p = cfg.params;
  auto grid = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  PhaseField f0 = multimode(grid, 1.0, cfg.seed);

  PhaseField a = solver::linear_evolve(f0, 1.0, p);
  PhaseField b = solver::fourier_ode_oracle(f0, 1.0, 1024, p);
  const double diff = sup_norm(difference(a, b));
  rep.criteria.push_back(crit_le("linear_evolve vs RK4 oracle, sup difference", diff, 1e-8));

  // The semigroup defect of the composed flow sits at the kernel's algebraic
  // v-tail wrapping the box, ~ t (Lv/2)^{-(1+alpha)} times the data's v-mass,
  // so this check sizes Lv for the 1e-9 tolerance (see tests for the scan).
  double semi = 0.0;
  {
    auto gs = make_grid(p.d, cfg.nx, 16384, cfg.Lx, 2560.0);
    Rng rng(cfg.seed);
    struct M { double kx, amp, ph; };
    std::vector<M> ms;
    for (int m = 0; m < 12; ++m) {
      const int mi = 1 + static_cast<int>(rng.bits() % 6);
      ms.push_back({2.0 * M_PI * mi / gs->Lx(), std::exp(-0.15 * mi * mi), rng.uniform(0.0, 2.0 * M_PI)});
    }
    PhaseField fs(gs);
    for_each_mode(*gs, [&](std::size_t i, const int* idx, const double*, const double*) {
      const double x = gs->coord_table(0)[idx[0]], v = gs->coord_table(1)[idx[1]];
      double sum = 0.0;
      for (const auto& mo : ms) sum += mo.amp * std::cos(mo.kx * x + mo.ph);
      fs.v[i] = sum * std::exp(-0.5 * v * v);
    });
    PhaseField c1 = solver::linear_evolve(solver::linear_evolve(fs, 0.3, p), 0.7, p);
    PhaseField c2 = solver::linear_evolve(fs, 1.0, p);
    semi = sup_norm(difference(c1, c2));
  }
  rep.criteria.push_back(crit_le("semigroup identity (0.3, 0.7), sup difference", semi, 1e-9));
  rep.values["oracle_diff"] = diff;
  rep.values["semigroup_diff"] = semi;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 4. kernel mass and positivity ----------------------------------------------

VerdictReport run_kernel_mass(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "kernel-mass";
  const Params& p = cfg.params;
  for (double t : {0.25, 1.0, 4.0}) {
    auto g = lab::kernel_grid(t, p, 512, 256);
    auto snap = lab::kernel_snapshot(t, {}, g, p);
    const double mass = cell_sum(snap.field);
    double mn = snap.field.v[0];
    for (double v : snap.field.v) mn = std::fmin(mn, v);
    const double sup = sup_norm(snap.field);
    std::ostringstream tag;
    tag << "t=" << t;
    rep.criteria.push_back(crit_le("mass defect |sum-1| at " + tag.str(), std::fabs(mass - 1.0), 1e-12));
    rep.criteria.push_back(crit_ge("min/sup (positivity) at " + tag.str(), mn / sup, -1e-8));
    rep.values["mass_" + tag.str()] = mass;
  }
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 5. pointwise envelope and sup-norm decay slope -----------------------------

VerdictReport run_pointwise_bound(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "pointwise-bound";
  const Params& p = cfg.params;
  const std::vector<double> ts = {0.25, 1.0, 4.0};

  const std::pair<int, int> orders[] = {{0, 0}, {0, 1}, {1, 0}};
  for (auto [m, n] : orders) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      auto res = lab::check_pointwise_bound(ts[i], m, n, p, 512, 256);
      if (i == 0) {
        lo = hi = res.sup_ratio;
      } else {
        lo = std::fmin(lo, res.sup_ratio);
        hi = std::fmax(hi, res.sup_ratio);
      }
      if (m == 0 && n == 0 && i == 1) {
        rep.criteria.push_back(crit_le("near-origin sharpness: sup ratio / origin ratio",
                                       res.sup_ratio / res.origin_ratio, 20.0));
        rep.values["argmax_scaled_radius"] = std::hypot(res.argmax_sx, res.argmax_sv);
      }
    }
    std::ostringstream tag;
    tag << "(m,n)=(" << m << "," << n << ")";
    rep.criteria.push_back(crit_le("sup-ratio spread across t at " + tag.str(), hi / lo, 10.0));
    rep.values["ratio_spread_" + tag.str()] = hi / lo;
  }

  std::vector<double> sups;
  for (double t : ts) {
    auto g = lab::kernel_grid(t, p, 512, 256);
    sups.push_back(sup_norm(lab::kernel_snapshot(t, {}, g, p).field));
  }
  double slope, resid;
  lab::loglog_fit(ts, sups, &slope, &resid);
  const double theory = -(2.0 * p.d / p.alpha + p.d);
  rep.criteria.push_back(crit_abs("sup-norm decay slope", slope, theory, 0.1));
  rep.values["sup_slope"] = slope;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 6a. weighted-L1 scaling suites ------------------------------------------------

namespace {

void add_fit(VerdictReport& rep, std::vector<lab::ScalingFitReport>& all,
             const lab::ScalingFitReport& fit, const std::string& label) {
  rep.criteria.push_back(crit_abs(label, fit.fitted_slope, fit.theory_slope, 0.1));
  all.push_back(fit);
  std::vector<std::pair<double, double>> curve;
  for (std::size_t i = 0; i < fit.xs.size(); ++i) curve.emplace_back(fit.xs[i], fit.norms[i]);
  rep.curves.emplace_back(label, curve);
}

std::vector<double> scaled_set(double base, std::initializer_list<double> mult) {
  std::vector<double> out;
  for (double m : mult) out.push_back(base * m);
  return out;
}

}  // namespace

VerdictReport run_l1_scaling(const ExperimentConfig& cfg, int law) {
  Timer timer;
  VerdictReport rep;
  rep.id = "e" + std::to_string(law) + "-scaling";
  const Params& p = cfg.params;
  std::vector<lab::ScalingFitReport> fits;

  const std::vector<double> ts_full = dyadic_times(-4, 2);
  const std::vector<double> ts_small = {0.0625, 0.125, 0.25};
  const std::vector<double> ts_mid = {0.125, 0.25, 0.5};
  auto xscale = [&](double t) { return std::pow(t, 1.0 / p.alpha + 1.0); };
  auto vscale = [&](double t) { return std::pow(t, 1.0 / p.alpha); };

  if (law == 1) {
    const double probes[5][4] = {
        {0, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0.5, 0}, {0, 0, 0, 0.5}};
    for (const auto& q : probes) {
      lab::ScalingProbe pr;
      pr.law = 1;
      pr.j1 = static_cast<int>(q[0]);
      pr.j2 = static_cast<int>(q[1]);
      pr.l1 = q[2];
      pr.l2 = q[3];
      std::ostringstream lbl;
      lbl << "e1 slope (" << pr.j1 << "," << pr.j2 << "," << pr.l1 << "," << pr.l2 << ")";
      add_fit(rep, fits, lab::fit_in_t(pr, ts_full, true, p, 512, 256), lbl.str());
    }
  } else if (law == 2 || law == 4) {
    lab::ScalingProbe pr;
    pr.law = law;
    pr.shift_axis = AxisKind::X;
    if (law == 2) pr.l1 = 0.5;
    if (law == 4) pr.g1 = pr.g2 = 0.3;
    // small-shift regime in t over the full window
    pr.a = 1e-5;
    add_fit(rep, fits, lab::fit_in_t(pr, ts_full, true, p, 512, 256),
            rep.id + " small-shift slope in t");
    // small-shift slope in a at fixed t
    {
      const double t = 0.25;
      add_fit(rep, fits,
              lab::fit_in_a(pr, t, scaled_set(xscale(t), {0.002, 0.004, 0.008, 0.016, 0.032}),
                            true, p, 512, 256),
              rep.id + " small-shift slope in a");
    }
    // large-shift regime: unweighted probe (the weighted large-shift asymptote
    // needs shift/spread ratios beyond desk scale to settle within 0.1)
    lab::ScalingProbe prl = pr;
    prl.l1 = prl.l2 = 0.0;
    // the fractional decorations fatten the kernel tails, so law 4 needs a
    // deeper shift/spread ratio (and the resolution to match) before the
    // large-shift asymptote settles
    prl.a = (law == 4 ? 20.0 : 10.0) * xscale(ts_mid.back());
    add_fit(rep, fits, lab::fit_in_t(prl, ts_mid, false, p, law == 4 ? 8192 : 4096, 256),
            rep.id + " large-shift slope in t");
    {
      const double t = 0.0625;
      add_fit(rep, fits,
              lab::fit_in_a(prl, t, scaled_set(xscale(t), {8, 16, 32, 64}), false, p, 2048, 256),
              rep.id + " large-shift slope in a");
    }
  } else if (law == 3 || law == 5) {
    lab::ScalingProbe pr;
    pr.law = law;
    pr.shift_axis = AxisKind::V;
    if (law == 3) pr.l2 = 0.5;
    if (law == 5) pr.g1 = pr.g2 = 0.3;
    pr.a = 1e-4;
    add_fit(rep, fits, lab::fit_in_t(pr, ts_full, true, p, 512, 256),
            rep.id + " small-shift slope in t");
    {
      const double t = 0.25;
      add_fit(rep, fits,
              lab::fit_in_a(pr, t, scaled_set(vscale(t), {0.002, 0.004, 0.008, 0.016, 0.032}),
                            true, p, 512, 256),
              rep.id + " small-shift slope in a");
    }
    lab::ScalingProbe prl = pr;
    prl.l1 = prl.l2 = 0.0;
    prl.a = (law == 5 ? 20.0 : 10.0) * vscale(ts_small.back());
    add_fit(rep, fits, lab::fit_in_t(prl, ts_small, false, p, 512, law == 5 ? 2048 : 512),
            rep.id + " large-shift slope in t");
    {
      const double t = 0.0625;
      add_fit(rep, fits,
              lab::fit_in_a(prl, t, scaled_set(vscale(t), {8, 16, 32, 64}), false, p, 512, 2048),
              rep.id + " large-shift slope in a");
    }
  } else {
    throw std::invalid_argument("run_l1_scaling: law must be 1..5");
  }

  std::ostringstream csv;
  lab::write_fit_csv(csv, fits);
  rep.fits_csv = csv.str();
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 6b. L1 interpolation inequality -----------------------------------------------

VerdictReport run_interpolation(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "interpolation";
  const Params& p = cfg.params;
  auto grid = make_grid(p.d, 64, 64, cfg.Lx, cfg.Lv);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    PhaseField f = multimode(grid, 1.0, cfg.seed + k);
    worst = std::fmax(worst, lab::interpolation_ratio(f, p.gamma));
  }
  rep.criteria.push_back(crit_le("interpolation ratio over 20 random fields", worst, 4.0));
  rep.values["max_ratio"] = worst;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 7. Picard convergence -----------------------------------------------------------

VerdictReport run_picard(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "picard";
  const Params& p = cfg.params;
  auto grid = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  PhaseField f0 = family_field(cfg.family, grid, p, cfg.amplitude, cfg.sigx, cfg.sigv, cfg.seed);

  TimeGrid tg = TimeGrid::dyadic(cfg.horizon, cfg.time_k);
  tg.duhamel_j = cfg.duhamel_j;
  PicardOptions opt;
  opt.tol = 1e-8 * cfg.amplitude;
  opt.max_iter = 12;
  opt.smallness_sigma = cfg.sigma_threshold;
  opt.cache_mb = cfg.cache_mb;
  auto [traj, diag] = solver::picard_solve(f0, tg, p, opt);

  double worst_ratio = 0.0;
  for (double r : diag.ratios) worst_ratio = std::fmax(worst_ratio, r);
  rep.criteria.push_back(crit_le("contraction ratios from iteration 2", worst_ratio, 0.5));
  rep.criteria.push_back(crit_le("iterations to converge", diag.converged ? diag.iterations : 1e9, 10));
  rep.criteria.push_back(crit_le("mild-equation residual (sup)", diag.residual_sup, 1e-6));

  double drift = 0.0;
  for (double m : traj.mass) drift = std::fmax(drift, std::fabs(m - traj.mass.front()));
  const double rel_drift = drift / std::fmax(l1_norm(f0), 1e-300);
  rep.criteria.push_back(crit_le("mass drift relative to ||f0||_L1", rel_drift, 1e-8));

  rep.values["seed_norm"] = diag.seed_norm_value;
  rep.values["iterations"] = diag.iterations;
  rep.values["residual"] = diag.residual_sup;
  rep.values["quad_error_est"] = diag.quad_error_est;
  for (std::size_t i = 0; i < diag.ratios.size(); ++i)
    rep.values["ratio_" + std::to_string(i + 2)] = diag.ratios[i];
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 8. cross-oracle: Picard vs splitting ----------------------------------------------

namespace {

double picard_vs_splitting(const ExperimentConfig& cfg, int K, int J, int nsteps) {
  const Params& p = cfg.params;
  auto grid = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  PhaseField f0 = family_field(cfg.family, grid, p, cfg.amplitude, cfg.sigx, cfg.sigv, cfg.seed);
  TimeGrid tg = TimeGrid::uniform(cfg.horizon, K);
  tg.duhamel_j = J;
  PicardOptions opt;
  opt.tol = 1e-10 * cfg.amplitude;
  opt.max_iter = 12;
  opt.estimate_quadrature_error = false;
  opt.sup_norm_stopping = true;
  auto [traj, diag] = solver::picard_solve(f0, tg, p, opt);
  if (!diag.converged) throw std::runtime_error("cross-oracle: picard did not converge");

  const double dt = cfg.horizon / nsteps;
  Trajectory split = solver::splitting_stepper(f0, dt, nsteps, p, {cfg.horizon});
  const int ip = traj.index_of(cfg.horizon);
  const int is = split.index_of(cfg.horizon);
  return sup_norm(difference(traj.fields[ip], split.fields[is]));
}

}  // namespace

VerdictReport run_cross_oracle(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "cross-oracle";
  const double base = picard_vs_splitting(cfg, cfg.time_k, cfg.duhamel_j, 128);
  const double fine = picard_vs_splitting(cfg, 2 * cfg.time_k, 2 * cfg.duhamel_j, 256);
  rep.criteria.push_back(crit_le("picard vs splitting at t=1 (sup)", base, 1e-3));
  rep.criteria.push_back(crit_ge("error reduction under 2x refinement", base / fine, 4.0));
  rep.values["diff_base"] = base;
  rep.values["diff_refined"] = fine;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 9. scaling invariance -----------------------------------------------------------

VerdictReport run_scaling_invariance(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "scaling-invariance";
  const Params& p = cfg.params;
  const double lam = 2.0;
  const double sx_fac = std::pow(lam, 1.0 + 1.0 / p.alpha);
  const double sv_fac = std::pow(lam, 1.0 / p.alpha);
  const double amp_fac = std::pow(lam, -p.kappa());

  auto g1 = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  auto g2 = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx * sx_fac, cfg.Lv * sv_fac);
  PhaseField f1 = gaussian_bump(g1, cfg.amplitude, cfg.sigx, cfg.sigv);
  PhaseField f2 = gaussian_bump(g2, cfg.amplitude * amp_fac, cfg.sigx * sx_fac, cfg.sigv * sv_fac);

  // linear flow
  {
    const double t1 = 0.5;
    PhaseField a = solver::linear_evolve(f1, t1, p);
    PhaseField b = solver::linear_evolve(f2, lam * t1, p);
    double disc = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i)
      disc = std::fmax(disc, std::fabs(b.v[i] - amp_fac * a.v[i]));
    const double rel = disc / (amp_fac * sup_norm(a));
    rep.criteria.push_back(crit_le("linear rescaling discrepancy (relative sup)", rel, 1e-8));
    rep.values["linear_disc"] = rel;
  }

  // nonlinear flow
  {
    TimeGrid tg1 = TimeGrid::dyadic(cfg.horizon, cfg.time_k);
    tg1.duhamel_j = cfg.duhamel_j;
    TimeGrid tg2 = TimeGrid::dyadic(lam * cfg.horizon, cfg.time_k);
    tg2.duhamel_j = cfg.duhamel_j;
    PicardOptions opt;
    opt.tol = 1e-9 * cfg.amplitude;
    opt.estimate_quadrature_error = false;
    auto [tr1, d1] = solver::picard_solve(f1, tg1, p, opt);
    auto [tr2, d2] = solver::picard_solve(f2, tg2, p, opt);
    if (!d1.converged || !d2.converged)
      throw std::runtime_error("scaling-invariance: picard did not converge");
    double rel = 0.0;
    for (std::size_t k = 0; k < tr1.times.size(); ++k) {
      if (tr1.times[k] == 0.0) continue;
      double disc = 0.0;
      for (std::size_t i = 0; i < tr1.fields[k].v.size(); ++i)
        disc = std::fmax(disc, std::fabs(tr2.fields[k].v[i] - amp_fac * tr1.fields[k].v[i]));
      rel = std::fmax(rel, disc / std::fmax(amp_fac * sup_norm(tr1.fields[k]), 1e-300));
    }
    rep.criteria.push_back(crit_le("nonlinear rescaling discrepancy (relative sup)", rel, 1e-3));
    rep.values["nonlinear_disc"] = rel;
  }
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 10. decay bound of the weighted sup norms ------------------------------------------

namespace {

struct DecayConstants {
  std::map<std::string, double> c_mn;      // sup over window
  std::map<std::string, double> trend;     // c(t_end) / max over earlier window times
  double seed = 0.0;
  bool converged = false;
};

DecayConstants decay_run(const std::string& family, double amplitude, const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  auto grid = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  PhaseField f0 = family_field(family, grid, p, amplitude, cfg.sigx, cfg.sigv, cfg.seed);

  TimeGrid tg = TimeGrid::dyadic(cfg.horizon, cfg.time_k);
  tg.duhamel_j = cfg.duhamel_j;
  PicardOptions opt;
  opt.tol = 1e-8 * amplitude;
  opt.norm_cfg = norms::NormConfig::stopping(1);
  opt.cache_mb = cfg.cache_mb;
  opt.estimate_quadrature_error = false;
  auto [traj, diag] = solver::picard_solve(f0, tg, p, opt);

  DecayConstants out;
  out.converged = diag.converged;
  out.seed = norms::seed_norm(traj.spectra.front(), p, norms::NormConfig::defaults());

  const double t_window_x = std::pow(cfg.Lx / 20.0, p.alpha / (p.alpha + 1.0));
  const double t_window_v = std::pow(cfg.Lv / 20.0, p.alpha);
  const double t_window = std::fmin(t_window_x, t_window_v);

  for (int m = 0; m + 0 <= 2; ++m)
    for (int n = 0; m + n <= 2; ++n) {
      const double w_exp = m + (m + n + p.alpha + p.beta - 2.0) / p.alpha;
      double cmax = 0.0, c_end = 0.0, cmax_earlier = 0.0;
      double t_last_in_window = 0.0;
      for (std::size_t k = 0; k < traj.times.size(); ++k)
        if (traj.times[k] > 0.0 && traj.times[k] <= t_window * (1.0 + 1e-12))
          t_last_in_window = traj.times[k];
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        if (!(t > 0.0) || t > t_window * (1.0 + 1e-12)) continue;
        SpectralField der = traj.spectra[k];
        apply_multiplier(der, deriv_multiplier(*grid, {m}, {n}));
        const double c = std::pow(t, w_exp) * sup_norm(to_physical(der)) / out.seed;
        cmax = std::fmax(cmax, c);
        if (t == t_last_in_window)
          c_end = c;
        else
          cmax_earlier = std::fmax(cmax_earlier, c);
      }
      const std::string key = std::to_string(m) + std::to_string(n);
      out.c_mn[key] = cmax;
      out.trend[key] = cmax_earlier > 0.0 ? c_end / cmax_earlier : 0.0;
    }
  return out;
}

}  // namespace

VerdictReport run_decay_bound(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "decay-bound";
  for (const std::string family : {"gaussian", "multimode", "rough"}) {
    DecayConstants full = decay_run(family, cfg.amplitude, cfg);
    DecayConstants half = decay_run(family, 0.5 * cfg.amplitude, cfg);
    rep.criteria.push_back(crit_ge(family + ": picard converged", full.converged ? 1.0 : 0.0, 1.0));
    double cworst = 0.0, trend_worst = 0.0, stab_worst = 0.0;
    for (const auto& [key, c] : full.c_mn) {
      cworst = std::fmax(cworst, c);
      trend_worst = std::fmax(trend_worst, full.trend.at(key));
      const double ch = half.c_mn.at(key);
      stab_worst = std::fmax(stab_worst, std::fabs(c - ch) / std::fmax(c, 1e-300));
      rep.values[family + "_C" + key] = c;
    }
    rep.criteria.push_back(crit_le(family + ": max weighted constant / [f0]", cworst, 100.0));
    rep.criteria.push_back(crit_le(family + ": end-of-window upward trend", trend_worst, 1.1));
    rep.criteria.push_back(crit_le(family + ": constants shift under amplitude halving", stab_worst, 0.1));
    rep.values[family + "_seed_norm"] = full.seed;
  }
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- 11. bilinear estimate and contraction ----------------------------------------------

namespace {

// F = f2 grad_v L^{-beta} f1 with the solver's dealiasing convention
std::vector<SpectralField> bilinear_force(const SpectralField& f1h, const SpectralField& f2h,
                                          const Params& p) {
  const TorusGrid& g = *f1h.grid;
  SpectralField a = f1h, b = f2h;
  dealias_23(a);
  dealias_23(b);
  PhaseField bphys = to_physical(b);
  std::vector<SpectralField> comps;
  for (int c = 0; c < g.dim(); ++c) {
    SpectralField w = a;
    apply_imag_multiplier(w, frac_grad_inv_symbol(g, p, c));
    PhaseField wphys = to_physical(w);
    PhaseField prod(f1h.grid);
    simd::backend().vd_mul(prod.v.data(), bphys.v.data(), wphys.v.data(), prod.v.size());
    SpectralField Fc = to_spectral(prod);
    dealias_23(Fc);
    comps.push_back(std::move(Fc));
  }
  return comps;
}

double bilinear_ratio(const Trajectory& t1, const Trajectory& t2, const Params& p,
                      const norms::NormConfig& cfg) {
  std::vector<double> times;
  std::vector<std::vector<SpectralField>> F;
  for (std::size_t k = 0; k < t1.times.size(); ++k) {
    times.push_back(t1.times[k]);
    F.push_back(bilinear_force(t1.spectra[k], t2.spectra[k], p));
  }
  std::vector<std::vector<const SpectralField*>> Fp;
  for (auto& row : F) {
    std::vector<const SpectralField*> r;
    for (auto& c : row) r.push_back(&c);
    Fp.push_back(r);
  }
  const double fn = norms::force_norm(times, Fp, p, cfg);
  const double x1 = norms::x_norm(t1.samples(), p, cfg);
  const double x2 = norms::x_norm(t2.samples(), p, cfg);
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  return fn / (x1 * x2);
}

}  // namespace

VerdictReport run_bilinear(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "bilinear";
  const Params& p = cfg.params;
  const auto ncfg = norms::NormConfig::defaults(p.max_deriv);
  TimeGrid tg = TimeGrid::dyadic(cfg.horizon, cfg.time_k);

  auto make_traj = [&](GridPtr g, double amp, std::uint64_t seed) {
    PhaseField f0 = multimode(g, amp, seed);
    return solver::linear_trajectory(f0, tg, p);
  };

  auto g1 = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  Trajectory a = make_traj(g1, cfg.amplitude, cfg.seed);
  Trajectory b = make_traj(g1, cfg.amplitude, cfg.seed + 7);
  const double r_base = bilinear_ratio(a, b, p, ncfg);

  Trajectory a3 = make_traj(g1, 3.0 * cfg.amplitude, cfg.seed);
  Trajectory b3 = make_traj(g1, 3.0 * cfg.amplitude, cfg.seed + 7);
  const double r_amp = bilinear_ratio(a3, b3, p, ncfg);

  auto g2 = make_grid(p.d, 2 * cfg.nx, 2 * cfg.nv, cfg.Lx, cfg.Lv);
  Trajectory af = make_traj(g2, cfg.amplitude, cfg.seed);
  Trajectory bf = make_traj(g2, cfg.amplitude, cfg.seed + 7);
  const double r_fine = bilinear_ratio(af, bf, p, ncfg);

  rep.criteria.push_back(crit_ge("bilinear ratio finite and positive", r_base > 0.0 ? 1.0 : 0.0, 1.0));
  rep.criteria.push_back(crit_rel("amplitude invariance of the ratio", r_amp, r_base, 0.01));
  rep.criteria.push_back(crit_rel("grid-doubling stability of the ratio", r_fine, r_base, 0.2));
  rep.values["ratio"] = r_base;
  rep.values["ratio_amp_scaled"] = r_amp;
  rep.values["ratio_fine"] = r_fine;
  rep.runtime_sec = timer.sec();
  return rep;
}

VerdictReport run_contraction(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "contraction";
  const Params& p = cfg.params;
  const auto ncfg = norms::NormConfig::defaults(p.max_deriv);
  TimeGrid tg = TimeGrid::dyadic(cfg.horizon, cfg.time_k);
  tg.duhamel_j = cfg.duhamel_j;

  auto measure = [&](GridPtr g, double amp, double* identity_err) {
    PhaseField f0 = gaussian_bump(g, amp, cfg.sigx, cfg.sigv);
    Trajectory g1 = solver::linear_trajectory(multimode(g, amp, cfg.seed), tg, p);
    Trajectory g2 = solver::linear_trajectory(multimode(g, amp, cfg.seed + 7), tg, p);
    Trajectory s1 = solver::apply_s(f0, g1, tg, p);
    Trajectory s2 = solver::apply_s(f0, g2, tg, p);

    Trajectory dS = s1, dg = g1;
    for (std::size_t k = 0; k < dS.spectra.size(); ++k) {
      add_scaled(dS.spectra[k], s2.spectra[k], -1.0);
      dS.fields[k] = to_physical(dS.spectra[k]);
      add_scaled(dg.spectra[k], g2.spectra[k], -1.0);
      dg.fields[k] = to_physical(dg.spectra[k]);
    }
    const double num = norms::x_norm(dS.samples(), p, ncfg);
    const double x1 = norms::x_norm(g1.samples(), p, ncfg);
    const double x2 = norms::x_norm(g2.samples(), p, ncfg);
    const double xd = norms::x_norm(dg.samples(), p, ncfg);

    if (identity_err) {
      // F[g1]-F[g2] = g1 D(g1-g2) + (g1-g2) D g2, computed both ways
      double worst = 0.0;
      for (std::size_t k = 1; k < g1.times.size(); ++k) {
        auto F1 = bilinear_force(g1.spectra[k], g1.spectra[k], p);
        auto F2 = bilinear_force(g2.spectra[k], g2.spectra[k], p);
        auto Fa = bilinear_force(dg.spectra[k], g1.spectra[k], p);   // g1 D(dg)
        auto Fb = bilinear_force(g2.spectra[k], dg.spectra[k], p);   // dg D(g2)
        for (int c = 0; c < g->dim(); ++c) {
          SpectralField lhs = F1[c];
          add_scaled(lhs, F2[c], -1.0);
          add_scaled(lhs, Fa[c], -1.0);
          add_scaled(lhs, Fb[c], -1.0);
          const double scale_ref = std::fmax(sup_norm(to_physical(F1[c])), 1e-300);
          worst = std::fmax(worst, sup_norm(to_physical(lhs)) / scale_ref);
        }
      }
      *identity_err = worst;
    }
    struct {
      double ratio, sigma;
    } out{num / ((x1 + x2) * xd), std::fmax(x1, x2)};
    return std::pair<double, double>(out.ratio, out.sigma);
  };

  auto g1 = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  double id_err = 0.0;
  auto [r_base, sigma] = measure(g1, cfg.amplitude, &id_err);
  auto [r_amp, sig2] = measure(g1, 3.0 * cfg.amplitude, nullptr);
  auto g2 = make_grid(p.d, 2 * cfg.nx, 2 * cfg.nv, cfg.Lx, cfg.Lv);
  auto [r_fine, sig3] = measure(g2, cfg.amplitude, nullptr);
  (void)sig2;
  (void)sig3;

  rep.criteria.push_back(crit_rel("amplitude invariance of the contraction ratio", r_amp, r_base, 0.01));
  rep.criteria.push_back(crit_rel("grid-doubling stability of the contraction ratio", r_fine, r_base, 0.2));
  rep.criteria.push_back(crit_le("difference identity F[g1]-F[g2] (relative sup)", id_err, 1e-12));
  rep.criteria.push_back(crit_le("small-data contraction: ratio * 2 sigma", r_base * 2.0 * sigma, 0.5));
  rep.values["ratio"] = r_base;
  rep.values["sigma"] = sigma;
  rep.values["identity_err"] = id_err;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- sigma calibration ---------------------------------------------------------------------

VerdictReport run_calibrate_sigma(const ExperimentConfig& cfg) {
  Timer timer;
  VerdictReport rep;
  rep.id = "calibrate-sigma";
  const Params& p = cfg.params;
  auto grid = make_grid(p.d, 64, 64, cfg.Lx, cfg.Lv);
  TimeGrid tg = TimeGrid::dyadic(1.0, 4);
  tg.duhamel_j = 8;

  auto first_ratio = [&](double amp) {
    PhaseField f0 = gaussian_bump(grid, amp, cfg.sigx, cfg.sigv);
    PicardOptions opt;
    opt.tol = 0.0;  // run exactly max_iter iterations
    opt.max_iter = 3;
    opt.norm_cfg = norms::NormConfig::stopping(1);
    opt.estimate_quadrature_error = false;
    auto [traj, diag] = solver::picard_solve(f0, tg, p, opt);
    return diag.ratios.empty() ? 0.0 : diag.ratios.front();
  };

  double lo = cfg.amplitude, hi = cfg.amplitude;
  double r = first_ratio(hi);
  int guard = 0;
  while (r < 0.5 && guard++ < 24) {
    lo = hi;
    hi *= 2.0;
    r = first_ratio(hi);
    if (!std::isfinite(r)) break;
  }
  for (int it = 0; it < 16; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double rm = first_ratio(mid);
    if (std::isfinite(rm) && rm < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  const double a_star = std::sqrt(lo * hi);
  const double r_star = first_ratio(a_star);
  PhaseField f0 = gaussian_bump(grid, a_star, cfg.sigx, cfg.sigv);
  const double sigma = norms::seed_norm(to_spectral(f0), p, norms::NormConfig::defaults());

  rep.criteria.push_back(crit_abs("first contraction ratio at calibrated amplitude", r_star, 0.5, 0.1));
  PhaseField fdef = gaussian_bump(grid, cfg.amplitude, cfg.sigx, cfg.sigv);
  const double seed_def = norms::seed_norm(to_spectral(fdef), p, norms::NormConfig::defaults());
  rep.criteria.push_back(crit_le("default amplitude seed norm below sigma", seed_def, sigma));
  rep.values["sigma"] = sigma;
  rep.values["amplitude_star"] = a_star;
  rep.values["first_ratio"] = r_star;
  rep.values["seed_norm_default"] = seed_def;
  rep.runtime_sec = timer.sec();
  return rep;
}

// ---- registry ------------------------------------------------------------------------------

std::vector<std::string> experiment_ids() {
  return {"psi-oracle",  "kolmogorov-oracle", "fourier-ode-oracle", "kernel-mass",
          "pointwise-bound", "e1-scaling",    "e2-scaling",         "e3-scaling",
          "e4-scaling",  "e5-scaling",        "interpolation",      "picard",
          "cross-oracle", "scaling-invariance", "decay-bound",      "bilinear",
          "contraction", "calibrate-sigma"};
}

VerdictReport run_experiment(const std::string& id, const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  if (id == "psi-oracle") return run_psi_oracle(cfg);
  if (id == "kolmogorov-oracle") return run_kolmogorov_oracle(cfg);
  if (id == "fourier-ode-oracle") {
    cfg.nx = cfg.nv = 128;
    return run_fourier_ode_oracle(cfg);
  }
  if (id == "kernel-mass") return run_kernel_mass(cfg);
  if (id == "pointwise-bound") return run_pointwise_bound(cfg);
  if (id == "e1-scaling") return run_l1_scaling(cfg, 1);
  if (id == "e2-scaling") return run_l1_scaling(cfg, 2);
  if (id == "e3-scaling") return run_l1_scaling(cfg, 3);
  if (id == "e4-scaling") return run_l1_scaling(cfg, 4);
  if (id == "e5-scaling") return run_l1_scaling(cfg, 5);
  if (id == "interpolation") return run_interpolation(cfg);
  if (id == "picard") return run_picard(cfg);
  if (id == "cross-oracle") {
    // The two integrators wrap the solution's algebraic v-tail differently,
    // an O(Lv^{-(1+alpha)}) floor that time refinement cannot shrink, and the
    // splitting's own dt-ratio approaches 4 from below; the box kills the
    // floor and the coarse sample grid puts the dominant share on the force
    // interpolation, which refines at ~5x.
    cfg.nx = 64;
    cfg.Lx = 10.0;
    cfg.nv = 16384;
    cfg.Lv = 2560.0;
    cfg.time_k = 8;
    cfg.duhamel_j = 4;
    return run_cross_oracle(cfg);
  }
  if (id == "scaling-invariance") {
    cfg.nx = cfg.nv = 128;
    cfg.time_k = 6;
    cfg.duhamel_j = 16;
    return run_scaling_invariance(cfg);
  }
  if (id == "decay-bound") {
    cfg.nx = 512;
    cfg.nv = 256;
    cfg.Lx = 80.0;
    cfg.Lv = 40.0;
    cfg.horizon = 2.0;
    cfg.time_k = 7;
    cfg.duhamel_j = 16;
    cfg.sigx = 0.8;
    cfg.sigv = 0.5;
    return run_decay_bound(cfg);
  }
  if (id == "bilinear") {
    cfg.nx = cfg.nv = 128;
    cfg.amplitude = 0.01;
    return run_bilinear(cfg);
  }
  if (id == "contraction") {
    cfg.nx = cfg.nv = 128;
    cfg.amplitude = 0.01;
    cfg.duhamel_j = 16;
    return run_contraction(cfg);
  }
  if (id == "calibrate-sigma") return run_calibrate_sigma(cfg);
  throw std::invalid_argument("unknown experiment id '" + id + "'");
}

}  // namespace fkfp::verify
