#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fkfp/core/field.hpp"
#include "fkfp/core/params.hpp"
#include "fkfp/core/shift.hpp"
#include "fkfp/core/symbols.hpp"

namespace fkfp::lab {

// H(t,.,.) with optional derivative/fractional decorations, on its own
// tail-rule box. Undecorated snapshots integrate to exactly 1 (zero mode).
struct KernelSnapshot {
  double t = 0.0;
  GridPtr grid;
  Decoration dec;
  PhaseField field;
  double imag_residue = 0.0;
  bool box_warning = false;  // box below the tail rule at this t
};

KernelSnapshot kernel_snapshot(double t, const Decoration& dec, GridPtr grid, const Params& p);

// per-time box: L per axis = pow2-quantized tail rule (margin 22 >= 20), with
// optional floors so shifted copies stay inside the box
GridPtr kernel_grid(double t, const Params& p, int nx, int nv, double margin = 22.0,
                    double pad_x = 0.0, double pad_v = 0.0);

// ||x|^{l1}|v|^{l2} K|_{L1} with nearest-image weights
double weighted_L1(const KernelSnapshot& snap, double l1, double l2);

// delta_a along one phase-space direction (exact roll when a is on-lattice)
PhaseField finite_difference(const PhaseField& f, AxisKind kind, int component, double a);

// ---- Lemma 2.2-style pointwise envelope check ------------------------------

struct PointwiseBoundResult {
  double t = 0.0;
  double sup_ratio = 0.0;     // sup of |H_dec| / envelope over the clean window
  double origin_ratio = 0.0;  // ratio at the lattice point nearest (0,0)
  double argmax_sx = 0.0;   // |x*| / t^{1/alpha+1} at the argmax
  double argmax_sv = 0.0;   // |v*| / t^{1/alpha}
  double min_over_sup = 0.0;  // min H / sup H (positivity, undecorated probes)
};

PointwiseBoundResult check_pointwise_bound(double t, int m, int n, const Params& p, int nx, int nv);

// ---- weighted-L1 scaling laws ----------------------------------------------

// law 1: ||x|^l1 |v|^l2 d_x^j1 d_v^j2 H|_L1                     ~ t^{s1}
// law 2: x-shifted difference, weights (l1,l2)                  (two |a| regimes)
// law 3: v-shifted difference, weights (l1,l2)
// law 4: x-shifted difference of L_x^{g1} L_v^{g2} d^j H        (two regimes)
// law 5: v-shifted counterpart of law 4
struct ScalingProbe {
  int law = 1;
  int j1 = 0, j2 = 0;
  double l1 = 0.0, l2 = 0.0;
  double g1 = 0.0, g2 = 0.0;
  AxisKind shift_axis = AxisKind::X;
  double a = 0.0;  // shift size for laws 2..5
};

struct ScalingFitReport {
  ScalingProbe probe;
  std::string var;  // "t" or "a"
  bool small_regime = true;
  std::vector<double> xs;     // t or a values
  std::vector<double> norms;  // measured weighted L1 norms
  double fitted_slope = 0.0;
  double theory_slope = 0.0;
  double residual = 0.0;  // rms log-log fit residual
};

// measured norm for one (probe, t)
double probe_norm(const ScalingProbe& probe, double t, const Params& p, int nx, int nv);

ScalingFitReport fit_in_t(const ScalingProbe& probe, const std::vector<double>& ts, bool small_regime,
                          const Params& p, int nx, int nv);
ScalingFitReport fit_in_a(ScalingProbe probe, double t, const std::vector<double>& as,
                          bool small_regime, const Params& p, int nx, int nv);

double theory_slope_t(const ScalingProbe& probe, bool small_regime, const Params& p);
double theory_slope_a(const ScalingProbe& probe, bool small_regime);

// least squares slope of log(y) vs log(x); residual = rms deviation
void loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double* slope,
                double* residual);

// ---- L1 interpolation inequality -------------------------------------------

// ||L_v^gamma f||_L1 / (||f||_L1^{1-gamma} ||grad_v f||_L1^{gamma}); 0 for f = 0
double interpolation_ratio(const PhaseField& f, double gamma);

// CSV rows: probe id, indices, var, value, measured norm, fitted slope,
// theory slope, residual
void write_fit_csv(std::ostream& os, const std::vector<ScalingFitReport>& reports);

}  // namespace fkfp::lab
