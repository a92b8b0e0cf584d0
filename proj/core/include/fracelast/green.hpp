#pragma once

#include <vector>

#include "fracelast/fraclap.hpp"

namespace fracelast {

struct ContinuumTerm {
  double alpha = 0.0;  // order alpha_j > 0
  double c = 0.0;      // coefficient c_j
};

struct ContinuumParams {
  double density = 1.0;  // rho > 0
  std::vector<ContinuumTerm> terms;
  double force_magnitude = 1.0;  // f0
  int dimension = 3;             // n in {1, 3}

  void validate() const;  // highest order > 1 with nonzero coefficient
  double multiplier(double lambda) const;  // sum_j c_j lambda^{alpha_j}
};

enum class OscAcceleration { none, alternating };

struct QuadratureConfig {
  double rel_tol = 1e-9;            // in (0, 1e-2]
  int max_half_periods = 400000;    // >= 8
  OscAcceleration acceleration = OscAcceleration::alternating;
  int small_lambda_panels = 60;     // dyadic grading depth of the first panel

  void validate() const;
};

struct GreenValue {
  double value = 0.0;
  double remainder = 0.0;   // remainder estimate of the accelerated tail
  int half_periods = 0;
};

// Radial Green function by oscillatory quadrature.
//   n=3: (1/(2 pi^2 r)) int_0^inf lambda sin(lambda r) / D(lambda) dlambda
//   n=1: (1/pi) int_0^inf cos(lambda r) / D(lambda) dlambda
// with D = sum_j c_j lambda^{alpha_j}.  The n=1 integral only converges at
// lambda = 0 when the lowest order is < 1; otherwise use green_radial_diff.
GreenValue green_radial(const ContinuumParams& params, double r,
                        const QuadratureConfig& cfg = {});

// n=1 regularized difference G(r) - G(r_ref) =
// (1/pi) int_0^inf [cos(lambda r) - cos(lambda r_ref)] / D dlambda,
// finite for lowest order <= 2.
GreenValue green_radial_diff(const ContinuumParams& params, double r, double r_ref,
                             const QuadratureConfig& cfg = {});

// u(r) = (f0/rho) G^n_alpha(r)
GreenValue displacement_point_force(const ContinuumParams& params, double r,
                                    const QuadratureConfig& cfg = {});

struct FarfieldResult {
  double value = 0.0;
  int terms_used = 0;            // index after optimal truncation
  std::vector<double> term_values;
  bool truncated_early = false;  // optimal truncation happened before k_max
};

// Far-field asymptotic series for a two-term law {(alpha < 2, c_alpha),
// (2, c2)}:  u ~ C0(alpha)/r^{3-alpha} + sum_k C_k(alpha)/r^{(2-alpha)(k+1)+1}
// with C0 = f0 Gamma(2-alpha) sin(pi alpha/2) / (2 pi^2 rho c_alpha) and the
// C_k integral evaluated as Gamma(s) sin(pi s/2), s = (2-alpha)(k+1), by
// analytic continuation.  Asymptotic semantics: optimally truncated.
FarfieldResult farfield_series(const ContinuumParams& params, double r, int k_max);

// Near-field closed forms for a law {(2, c2), (alpha > 2, c_alpha)}:
//   2 < alpha < 3: u ~ f0 Gamma(2-alpha) sin(pi alpha/2) /
//                      (2 pi^2 rho c_alpha) * r^{alpha-3}   (c2-independent)
//   alpha > 3:     u(0) = f0 / (2 pi (alpha-2) rho
//                      c2^{(alpha-3)/(alpha-2)} c_alpha^{1/(alpha-2)}
//                      sin(pi/(alpha-2)))
// alpha = 3 is rejected (both branches degenerate).
double nearfield_gradient(const ContinuumParams& params, double r);

// u(r) = (1/rho) int G(|r - r'|) f(r') d^n r' for a radial source profile
// sampled on source.x(i) >= 0 (n = 3) or a compactly supported line source
// (n = 1, evaluated relative to the first output point's gauge).
std::vector<double> displacement_field_convolution(const GridField& source,
                                                   const ContinuumParams& params,
                                                   const QuadratureConfig& cfg,
                                                   const std::vector<double>& r_eval);

namespace detail {
// Exposed for the bracketing-property tests: the raw half-period partial
// sums feeding the alternating-series acceleration.
struct OscillatoryTrace {
  std::vector<double> partial_sums;  // the window handed to the accelerator
};
GreenValue green_radial_traced(const ContinuumParams& params, double r,
                               const QuadratureConfig& cfg, OscillatoryTrace* trace);
}  // namespace detail

}  // namespace fracelast
