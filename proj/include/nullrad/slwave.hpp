#pragma once

#include "nullrad/core.hpp"
#include "nullrad/field.hpp"

#include <cstddef>
#include <vector>

namespace nullrad {

struct TrOptions {
  double dt = 0.0; // 0 means dt = dr; anything else must equal dr
  double blowup_limit = 1e8;
};

/// Zero-pads data so that r_max >= support_radius + T + 2 dr (plus `extra`).
CauchyData prepare_domain(const CauchyData &data, double T, double extra = 0.0);

/// Leapfrog for w = r u on the Courant-one grid, w_tt - w_rr + r f(w/r) = 0,
/// from Cauchy data at t = 0 to t = T.
SolutionField solve_tr(const CauchyData &data, const Nonlinearity &nl,
                       double T, const TrOptions &opt = {});

/// Continues the leapfrog from two consecutive levels (w at t0 - h and t0)
/// for `steps` steps. Returns the levels t0 - h .. t0 + steps h, row-major.
std::vector<double> march_levels(const std::vector<double> &w_prev,
                                 const std::vector<double> &w_cur,
                                 std::size_t steps, double h,
                                 const Nonlinearity &nl,
                                 double blowup_limit = 1e8);

/// v(mu, nu) = r u on the compactified triangle 0 <= nu <= mu <= T_c with
/// mu = -1/(t - r), nu = 1/(t + r). The diagonal mu = nu is t = 0 and the
/// edge nu = 0 is future null infinity.
struct CharGrid {
  double T_c = 0.0;
  double dmu = 0.0;
  std::size_t M = 0;         // mu_i = i dmu, 0 <= i <= M
  double R = 0.0;            // data support radius
  std::vector<double> v;     // packed: index(i, j) = i (i + 1) / 2 + j
  std::vector<double> vmu_d; // d_mu v on the diagonal, from the data
  std::vector<double> vnu_d; // d_nu v on the diagonal, from the data
  std::size_t iterations_max = 0; // worst inner fixed-point count

  static std::size_t index(std::size_t i, std::size_t j) {
    return i * (i + 1) / 2 + j;
  }
  double at(std::size_t i, std::size_t j) const { return v[index(i, j)]; }
  double mu(std::size_t i) const { return static_cast<double>(i) * dmu; }
};

struct GoursatOptions {
  double fp_tol = 1e-12;
  int fp_max_iter = 50;
};

CharGrid solve_goursat(const CauchyData &data, const Nonlinearity &nl,
                       double T_c, double dmu,
                       const GoursatOptions &opt = {});

/// Per-slice diagnostics of a (t, r) solution.
struct DiagnosticSeries {
  std::vector<double> t;
  std::vector<EnergyReport> slices;
  /// Leapfrog-conserved discrete energy on half steps (exact for c = 0).
  std::vector<double> scheme_energy;
};

DiagnosticSeries diagnostics(const SolutionField &sol, const Nonlinearity &nl);

struct FluxCheck {
  double bottom = 0.0;   // int A dmu on nu = nu0
  double right = 0.0;    // int B dnu on mu = mu1
  double interior = 0.0; // double integral of the sign-definite term
  double diagonal = 0.0; // int (v_mu^2 - v_nu^2) / 2 on mu = nu
  double residual = 0.0; // relative
};

/// Integrated energy identity on {nu0 <= nu <= mu <= mu1}; the defaults use
/// the whole triangle.
FluxCheck char_energy_flux_check(const CharGrid &grid, const Nonlinearity &nl,
                                 std::size_t j0 = 0, std::size_t i1 = 0);

/// max |u_tr - v / r| over grid nodes of the Goursat triangle that lie inside
/// the (t, r) footprint (bilinear interpolation of the (t, r) field).
double engine_agreement(const SolutionField &sol, const CharGrid &grid);

} // namespace nullrad
