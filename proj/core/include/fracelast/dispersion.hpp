#pragma once

#include <vector>

namespace fracelast {

struct LawTerm {
  double alpha = 0.0;  // order, > 0
  double a = 0.0;      // signed coefficient a_alpha
};

// Target dispersion: Khat(theta) ~ Khat(0) + sum_j a_j |theta|^{alpha_j},
// with theta = k*dx the dimensionless wavenumber.  Orders strictly
// increasing, at least one term.
struct DispersionLaw {
  std::vector<LawTerm> terms;
  double k_hat_zero = 0.0;

  void validate() const;  // throws validation_error
};

// Symmetric interaction coefficients K(n) for n = 1..n_max; K(-n) = K(n).
struct LatticeKernel {
  std::vector<double> coefficients;  // K(1)..K(n_max)
  double spacing = 1.0;              // dx > 0

  void validate() const;
  int n_max() const { return static_cast<int>(coefficients.size()); }
};

struct LatticeSpec {
  LatticeKernel kernel;
  double mass = 1.0;      // M > 0
  double coupling = 1.0;  // g, signed
  int particle_count = 3; // N >= 3

  void validate() const;
};

// Khat(0) - Khat(k*dx) = 2 sum_n K(n) (1 - cos(n k dx)).  Even in k,
// 2*pi/dx-periodic, exactly 0 at k = 0.
double eval_lattice_dispersion(const LatticeKernel& kernel, double k);

// 2 sum_n K(n)
double khat_zero(const LatticeKernel& kernel);

// sum_j a_j |theta|^{alpha_j}, the law's deviation from Khat(0); theta = k*dx.
// The lattice-side counterpart eval_lattice_dispersion targets the negative
// of this (Khat(0) - Khat = -sum a_j theta^alpha_j).
double eval_target_dispersion(const DispersionLaw& law, double theta);

struct SynthesisOptions {
  // Taper the slope of the theta-remap to zero at the zone boundary so the
  // synthesized K(n) has a pure n^{-(1+alpha)} tail instead of the
  // alternating n^{-2} boundary artifact.  The remap is the identity below
  // flatten_start, so the round-trip band is unaffected.
  bool flatten = true;
  double flatten_start = 1.0;   // theta below which the target is untouched
  double abs_tol = 1e-10;       // quadrature agreement target per K(n)
  int check_points = 40;        // subsample size for the refinement check
  // Reject a kernel whose measured round trip is off by more than 50%.
  // Disable for coefficient-level diagnostics of the bare (unflattened)
  // series, whose truncated tail is O(1) at long wavelengths by design.
  bool enforce_roundtrip = true;
};

struct SynthesisResult {
  LatticeKernel kernel;
  double quadrature_error = 0.0;           // measured refinement disagreement
  double roundtrip_max_rel_error = 0.0;    // over k*dx in [0.01, 0.5]
};

// Inverse of the cosine series: K(n) = (1/pi) int_0^pi phi(theta) cos(n
// theta) dtheta with phi = sum_j a_j m(theta)^{alpha_j}.  Throws
// numerical_error when the measured round-trip error exceeds 50% (n_max too
// small).
SynthesisResult synthesize_kernel(const DispersionLaw& law, double spacing, int n_max,
                                  const SynthesisOptions& options = {});

// omega^2(k) = sum_j G_j |k|^{alpha_j}, G_j = g a_j dx^{alpha_j} / M.
// Throws numerical_error when the result is negative (instability).
double dispersion_relation(const LatticeSpec& spec, const DispersionLaw& law, double k);

struct StabilityReport {
  bool stable = true;
  double worst_value = 0.0;  // most negative omega^2 encountered
  double worst_theta = 0.0;
};

// Samples g*(Khat(0)-Khat) over the Brillouin zone; stable when
// omega^2 = -g*(Khat(0)-Khat)/M >= 0 everywhere.
StabilityReport check_stability(const LatticeSpec& spec, int samples = 512);

}  // namespace fracelast
