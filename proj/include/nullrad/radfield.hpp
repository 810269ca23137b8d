#pragma once

#include "nullrad/core.hpp"
#include "nullrad/field.hpp"
#include "nullrad/slwave.hpp"

#include <cstdint>
#include <vector>

namespace nullrad {

struct ExtractionOptions {
  /// Extraction stops at s = T - buffer; 0 selects max(3 R, 3).
  double buffer = 0.0;
  /// Relative size of the extrapolation correction that flags a sample.
  double flag_fraction = 0.1;
};

/// Radiation field on the characteristic lattice s_k = k h, with per-sample
/// extrapolation bookkeeping.
struct ExtractedRadiation {
  RadiationProfile F;
  std::vector<std::uint8_t> not_converged;
  double max_correction = 0.0; // largest |F - raw sample at the latest time|
  double max_crosscheck = 0.0; // largest disagreement with the 2-term model
  std::size_t flagged = 0;
};

/// F(s) = -lim d_t w along t - r = s, extrapolated in 1/r with the
/// r^-3, r^-4 tail model from samples at r, r/2, r/3 on each characteristic.
ExtractedRadiation forward_radiation_tr(const SolutionField &sol,
                                        const ExtractionOptions &opt = {});

/// Trace of -mu^2 d_mu v on nu = 0, resampled at s_k = k ds with
/// s in [-R - 2 ds, -1/T_c].
RadiationProfile forward_radiation_goursat(const CharGrid &grid, double ds);

/// One value of the Goursat trace. s >= 0 is outside this chart; s in
/// (-1/T_c, 0) is outside the computed range.
double goursat_trace_at(const CharGrid &grid, double s);

struct DuhamelRadiation {
  RadiationProfile F;
  double tail_bound = 0.0; // estimated size of the neglected t > T part
  bool truncation_warning = false;
};

/// Linear field plus the s-derivative of the plane integral of f(u), taken
/// under the integral: F(s) = R_+(data)(s) + (1/2) int_0^T q(t, t - s) dt with
/// q(t, x) = x f(u(t, |x|)). The t > T remainder is estimated from the r^-4
/// decay of q along the outgoing characteristic and added; its size is
/// reported as tail_bound.
DuhamelRadiation forward_radiation_duhamel(const CauchyData &data,
                                           const SolutionField &sol,
                                           const Nonlinearity &nl,
                                           const ExtractionOptions &opt = {},
                                           double tail_tol = 1e-3);

/// Reflection G(s) -> -G(-s) on the lattice.
RadiationProfile reflect(const RadiationProfile &G);

/// Backward field via L_-(phi, psi)(s) = -L_+(phi, -psi)(-s).
ExtractedRadiation backward_radiation(const CauchyData &data,
                                      const Nonlinearity &nl, double T,
                                      const ExtractionOptions &opt = {});

/// Convenience: pad, solve and extract L_+.
ExtractedRadiation forward_radiation(const CauchyData &data,
                                     const Nonlinearity &nl, double T,
                                     const ExtractionOptions &opt = {});

/// sqrt(4 pi int (F - G)^2) on the common lattice window of F and G.
double l2_distance(const RadiationProfile &F, const RadiationProfile &G);
/// Restriction of F to [s_lo, s_hi] on its own lattice.
RadiationProfile restrict_window(const RadiationProfile &F, double s_lo,
                                 double s_hi);

} // namespace nullrad
