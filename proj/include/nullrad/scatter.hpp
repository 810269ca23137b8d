#pragma once

#include "nullrad/core.hpp"
#include "nullrad/radfield.hpp"

#include <string>
#include <vector>

namespace nullrad {

struct ScatterConfig {
  double delta = 0.0;  // tail threshold; 0 selects 0.1 sqrt(energy) = 0.1 |F|
  double T0_max = 4.0; // cap on the asymptotic time
  double fp_tol = 0.0; // outer tolerance; 0 selects 1e-6 |F|
  int max_outer = 40;
  int inner_duhamel_iters = 2;
  double buffer = 3.0;  // extraction buffer of the forward evaluations
  double T = 0.0;       // evolution time for inversion; 0 selects max(8, s_max + buffer)
  double T_A = 8.0;     // evolution time for the forward map of A
  double mean_tol = 1e-5;
  bool seed = true;     // build the backward-evolution seed

  void validate() const;
};

struct InverseResult {
  CauchyData data;
  double residual = 0.0;    // |F - L_+(data)| on the comparison window
  double mean_defect = 0.0; // part of the residual outside the range of the update
  std::vector<double> history;
  int outer_iterations = 0;
  double T0 = 0.0;
  bool T0_capped = false;
  bool seed_used = false;
  double seed_residual = 0.0;
  double linear_residual = 0.0;
};

/// Forward map used by the scattering operators: the closed form when the
/// equation is linear, the (t, r) extraction otherwise; returned on the
/// lattice window [k_lo, k_hi] ds.
RadiationProfile plus_map(const CauchyData &data, const Nonlinearity &nl,
                          double T, double buffer, long long k_lo,
                          long long k_hi);

/// Data (phi, psi) with L_+(phi, psi) = F.
InverseResult inverse_radiation(const RadiationProfile &F,
                                const Nonlinearity &nl,
                                const ScatterConfig &cfg = {});

struct WaveOperatorResult {
  InverseResult inverse;
  double support_radius = 0.0; // measured at 1e-8 relative
};

/// Omega_+ = L_+^{-1} R_+.
WaveOperatorResult wave_operator_plus(const CauchyData &data0,
                                      const Nonlinearity &nl,
                                      const ScatterConfig &cfg = {});

struct ScatteringResult {
  RadiationProfile AF;
  CauchyData past_data;    // L_-^{-1} F
  double unitarity_defect = 0.0;
  double inverse_residual = 0.0;
  double tail_bound = 0.0; // formula route only
  bool truncation_warning = false;
};

/// A F = L_+(L_-^{-1} F).
ScatteringResult scattering_A(const RadiationProfile &F,
                              const Nonlinearity &nl,
                              const ScatterConfig &cfg = {});

/// A F = -F + (1/4 pi) d_s of the plane integral of f(u) over the solution
/// glued at t = 0 from its forward and backward halves.
ScatteringResult scattering_A_formula(const RadiationProfile &F,
                                      const Nonlinearity &nl,
                                      const ScatterConfig &cfg = {});

struct ScatteringSResult {
  CauchyData data;
  double energy_norm_defect = 0.0;
  double unitarity_defect = 0.0;
};

/// S = R_+^{-1} L_+ L_-^{-1} R_-.
ScatteringSResult scattering_S(const CauchyData &data, const Nonlinearity &nl,
                               const ScatterConfig &cfg = {});

} // namespace nullrad
