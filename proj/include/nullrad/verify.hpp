#pragma once

#include "nullrad/core.hpp"
#include "nullrad/scatter.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nullrad {

using Json = nlohmann::ordered_json;

/// Smooth compactly supported test profile on [0, R]:
///   poly:  amp (1 - x^2)^k,
///   gauss: amp exp(-x^2 / (2 sigma^2)) (1 - x^2)^k,   x = r / R.
struct BumpSpec {
  enum class Kind { poly, gauss };
  Kind kind = Kind::poly;
  int k = 3;
  double R = 1.0;
  double amp = 1.0;
  double sigma = 0.5;

  double operator()(double r) const;
  /// d/dr of the profile (r may be negative; the profile is even).
  double derivative(double r) const;
  std::string label() const;
};

/// Seeded family: kinds {poly k=3, poly k=4, gauss k=3} x amplitudes.
/// The seed jitters the Gaussian width deterministically.
std::vector<BumpSpec> test_family(std::uint64_t seed,
                                  const std::vector<double> &amplitudes = {
                                      0.05, 0.2, 1.0});

/// NULLRAD_SEED or 0.
std::uint64_t harness_seed();
/// NULLRAD_THREADS or 1 (at least 1).
unsigned harness_threads();

/// Runs cell(i) for i < n on up to `threads` workers; results are placed by
/// index so the outcome does not depend on scheduling.
std::vector<Json> run_cells(std::size_t n,
                            const std::function<Json(std::size_t)> &cell,
                            unsigned threads);

struct Report {
  std::string name;
  bool passed = true;
  Json body;
  Json to_json() const;
};

struct ForwardSupportOptions {
  double dr = 1.0 / 256.0;
  double T = 8.0;   // (t, r) route
  double T_c = 4.0; // Goursat route
};

/// Finite speed of propagation at null infinity for psi = spec, phi = 0:
/// the Goursat trace vanishes exactly for s <= -R and the (t, r) route is
/// below 1e-10 for s <= -R - 2 dr.
Report support_forward_check(const std::vector<BumpSpec> &specs,
                             const Nonlinearity &nl,
                             const ForwardSupportOptions &opt = {});

struct InverseSupportOptions {
  double dr = 1.0 / 256.0;
  double rel_tol = 1e-8;
  double G_radius = 0.5; // G is supported in [-G_radius, G_radius]
  /// Scale F so that |F| equals |R_+(0, spec)|, the linear energy norm of
  /// the family datum with the same amplitude. Off: G carries the amplitude.
  bool match_family_energy = true;
  ScatterConfig cfg{};
};

/// F = G' for G = spec on [-G_radius, G_radius]. Reconstructs the data,
/// measures rho at rel_tol and compares it with
/// -min(inf supp F, inf supp A F) + 2 dr. The contrapositive probe is
/// reported only.
Report support_inverse_check(const std::vector<BumpSpec> &specs,
                             const Nonlinearity &nl,
                             const InverseSupportOptions &opt = {});

/// Round-trip support: F = L_+(datum); the reconstruction's support radius
/// matches the datum's within 2 dr.
Report support_roundtrip_check(const CauchyData &datum, const Nonlinearity &nl,
                               const ScatterConfig &cfg = {},
                               double rel_tol = 1e-8);

struct ContinuityOptions {
  double T = 8.0;
  std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4};
  double small_energy = 0.01; // norm-continuity regime threshold
};

/// |L_+(data + d pert) - L_+(data)| against d, with pert normalized to
/// |R_+(pert)| = 1.
Report continuity_probe(const CauchyData &datum, const CauchyData &pert,
                        const Nonlinearity &nl,
                        const ContinuityOptions &opt = {});

/// Empirical Lipschitz constant of inverse_radiation near F, in the linear
/// energy norm against |.| on radiation fields.
Report inverse_continuity_probe(const RadiationProfile &F,
                                const RadiationProfile &G,
                                const Nonlinearity &nl,
                                const std::vector<double> &deltas,
                                const ScatterConfig &cfg = {});

struct ConvergenceOptions {
  double T = 8.0;
  double T_c = 8.0;
  double min_order = 1.8;
};

/// Observed refinement orders of the energy drift, the energy identity
/// defect, the pairwise method gaps and the linear oracle error. The datum
/// is given as a generator so it can be sampled at each resolution.
Report convergence_study(const std::function<CauchyData(double dr)> &datum,
                         const Nonlinearity &nl,
                         const std::vector<double> &resolutions,
                         const ConvergenceOptions &opt = {});

/// The quick example battery: closed forms, degenerate cases and a coarse
/// run of each harness.
Report selftest();

} // namespace nullrad
