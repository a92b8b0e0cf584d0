#pragma once

#include <functional>
#include <vector>

namespace fracelast {

// Uniform samples of a real field on a periodic interval
// [origin, origin + P*h).
struct GridField {
  std::vector<double> samples;
  double spacing = 1.0;  // h > 0
  double origin = 0.0;

  void validate() const;  // P >= 8, h > 0
  std::size_t size() const { return samples.size(); }
  double x(std::size_t i) const { return origin + spacing * static_cast<double>(i); }
};

// Fourier-multiplier form: coefficients multiplied by |k_j|^alpha with the
// symmetric periodic wavenumbers k_j = 2*pi*j/(P*h), j in (-P/2, P/2].
// alpha = 0 is the identity (0^0 = 1 at the zero mode).
GridField spectral_frac_laplacian(const GridField& field, double alpha);

// Backward finite difference of order m:
// sum_{k=0}^m (-1)^k C(m,k) f(x - k z)
double finite_difference(const std::function<double(double)>& f, double x, double z, int m);

// A_m(alpha) = sum_{j=1}^m (-1)^{j-1} C(m,j) j^alpha
double am_constant(int m, double alpha);

// d_n(m,alpha) = pi^{1+n/2} A_m(alpha) /
//                [2^alpha Gamma(1+alpha/2) Gamma(n/2+alpha/2) sin(pi alpha/2)]
// Throws degenerate_normalization when alpha is an even integer or
// A_m(alpha) vanishes.
double dn_constant(int n, int m, double alpha);

struct HyperSingularConfig {
  int m = 2;                  // difference order
  int step_count = 64;        // outer geometric panels
  double cutoff = 40.0;       // outer truncation radius (plus analytic tail)
  double inner_split = 1.0;   // inner/outer split radius
  double taylor_split = 0.01; // analytic small-z Taylor region below this
  double rel_tol = 1e-8;      // advertised refinement tolerance
};

// One-dimensional hyper-singular representation:
// (1/d_1(m,alpha)) int_0^inf z^{-alpha-1} [D_z + D_{-z}] dz, with D_z the
// m-th backward difference at x.  The symmetrized difference is O(z^{m+1})
// for odd m, O(z^m) for even m, so validity is alpha < m+1 (odd m) or
// alpha < m (even m); the pairing makes m = 1 valid for alpha = 1
// (classical principal-value form, d_1(1,1) = pi).
// Verified internally by a refined pass; throws numerical_error when the
// two passes disagree by more than 10x rel_tol.
double hypersingular_frac_laplacian(const std::function<double(double)>& f, double x,
                                    double alpha, const HyperSingularConfig& cfg = {});

}  // namespace fracelast
