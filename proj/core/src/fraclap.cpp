#include "fracelast/fraclap.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "fracelast/errors.hpp"
#include "fracelast/fft.hpp"
#include "fracelast/quadrature.hpp"

namespace fracelast {

void GridField::validate() const {
  if (samples.size() < 8) throw validation_error("GridField: need at least 8 samples");
  if (!(spacing > 0.0)) throw validation_error("GridField: spacing must be > 0");
}

GridField spectral_frac_laplacian(const GridField& field, double alpha) {
  field.validate();
  if (alpha < 0.0) throw validation_error("spectral_frac_laplacian: alpha must be >= 0");
  const std::size_t p = field.samples.size();
  std::vector<std::complex<double>> spectrum(field.samples.begin(), field.samples.end());
  fft_inplace(spectrum, false);
  const double dk = 2.0 * M_PI / (static_cast<double>(p) * field.spacing);
  for (std::size_t j = 0; j < p; ++j) {
    const double m = (j <= p / 2) ? static_cast<double>(j)
                                  : static_cast<double>(j) - static_cast<double>(p);
    const double k = std::abs(m) * dk;
    const double mult = (k == 0.0) ? (alpha == 0.0 ? 1.0 : 0.0) : std::pow(k, alpha);
    spectrum[j] *= mult;
  }
  fft_inplace(spectrum, true);
  GridField out = field;
  for (std::size_t j = 0; j < p; ++j) out.samples[j] = spectrum[j].real();
  return out;
}

namespace {

double binomial(int m, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

double finite_difference(const std::function<double(double)>& f, double x, double z,
                         int m) {
  if (m < 1) throw validation_error("finite_difference: m must be >= 1");
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 0; k <= m; ++k) {
    sum += sign * binomial(m, k) * f(x - static_cast<double>(k) * z);
    sign = -sign;
  }
  return sum;
}

double am_constant(int m, double alpha) {
  if (m < 1) throw validation_error("am_constant: m must be >= 1");
  if (!(alpha > 0.0)) throw validation_error("am_constant: alpha must be > 0");
  double sum = 0.0;
  double sign = 1.0;  // (-1)^{j-1} starting at j=1
  for (int j = 1; j <= m; ++j) {
    sum += sign * binomial(m, j) * std::pow(static_cast<double>(j), alpha);
    sign = -sign;
  }
  return sum;
}

double dn_constant(int n, int m, double alpha) {
  if (n < 1 || n > 3) throw validation_error("dn_constant: n must be in {1,2,3}");
  const double s = std::sin(M_PI * alpha / 2.0);
  if (std::abs(s) < 1e-12)
    throw degenerate_normalization("dn_constant: alpha at an even integer (sin pole)");
  const double am = am_constant(m, alpha);
  double am_scale = 0.0;
  for (int j = 1; j <= m; ++j)
    am_scale += binomial(m, j) * std::pow(static_cast<double>(j), alpha);
  if (std::abs(am) < 1e-10 * am_scale)
    throw degenerate_normalization("dn_constant: A_m(alpha) vanishes");
  const double nn = static_cast<double>(n);
  return std::pow(M_PI, 1.0 + nn / 2.0) * am /
         (std::pow(2.0, alpha) * std::tgamma(1.0 + alpha / 2.0) *
          std::tgamma(nn / 2.0 + alpha / 2.0) * s);
}

namespace {

struct HyperPass {
  int outer_panels;
  double cutoff;
  double taylor_split;   // analytic Taylor piece below this z
  double deriv_step;     // base step for the derivative estimates
  int gl_order;
};

// sum_{k=0}^m (-1)^k C(m,k) k^p
double difference_moment(int m, int p) {
  double s = 0.0, sign = 1.0;
  for (int k = 0; k <= m; ++k) {
    s += sign * binomial(m, k) * std::pow(static_cast<double>(k), p);
    sign = -sign;
  }
  return s;
}

// even-order central difference estimate of f^(p), Richardson-extrapolated
double central_derivative(const std::function<double(double)>& f, double x, int p,
                          double h) {
  const auto estimate = [&](double step) {
    double s = 0.0, sign = 1.0;
    for (int i = 0; i <= p; ++i) {
      s += sign * binomial(p, i) * f(x + (static_cast<double>(p) / 2.0 - i) * step);
      sign = -sign;
    }
    return s / std::pow(step, p);
  };
  const double coarse = estimate(h);
  const double fine = estimate(h * 0.5);
  return (4.0 * fine - coarse) / 3.0;
}

double hyper_integral(const std::function<double(double)>& f, double x, double alpha,
                      int m, double split, const HyperPass& pass) {
  const GaussLegendre rule(pass.gl_order);
  // symmetrized pair: z^{-alpha-1} [Delta^m_z + Delta^m_{-z}] f(x)
  const auto integrand = [&](double z) {
    return (finite_difference(f, x, z, m) + finite_difference(f, x, -z, m)) /
           std::pow(z, alpha + 1.0);
  };
  double total = 0.0;
  // [0, delta]: direct evaluation of the symmetrized difference cancels
  // catastrophically (rounding noise amplified by z^{-alpha-1}), so use its
  // even Taylor expansion S(z) = 2 sum_p M_p f^(p)(x) z^p / p! analytically.
  const double delta = pass.taylor_split;
  const int p1 = (m % 2 == 0) ? m : m + 1;  // leading surviving even order
  double fact1 = 1.0, fact2 = 1.0;
  for (int i = 2; i <= p1; ++i) fact1 *= static_cast<double>(i);
  fact2 = fact1 * static_cast<double>(p1 + 1) * static_cast<double>(p1 + 2);
  const double a1 = 2.0 * difference_moment(m, p1) / fact1 *
                    central_derivative(f, x, p1, pass.deriv_step);
  const double a2 = 2.0 * difference_moment(m, p1 + 2) / fact2 *
                    central_derivative(f, x, p1 + 2, 5.0 * pass.deriv_step);
  total += a1 * std::pow(delta, static_cast<double>(p1) - alpha) /
               (static_cast<double>(p1) - alpha) +
           a2 * std::pow(delta, static_cast<double>(p1) + 2.0 - alpha) /
               (static_cast<double>(p1) + 2.0 - alpha);
  // dyadic panels from split down to delta
  double hi = split;
  while (hi > delta * (1.0 + 1e-12)) {
    const double lo = std::max(hi * 0.5, delta);
    total += rule.integrate(integrand, lo, hi);
    hi = lo;
  }
  // outer: geometric panels from split to cutoff
  const double ratio = std::pow(pass.cutoff / split,
                                1.0 / static_cast<double>(pass.outer_panels));
  double lo = split;
  for (int i = 0; i < pass.outer_panels; ++i) {
    const double next = lo * ratio;
    total += rule.integrate(integrand, lo, next);
    lo = next;
  }
  // analytic tail with the settled value of the symmetrized difference
  // (2 f(x) for decaying f, identically 0 for constants and, at m = 1,
  // for linears)
  const double settled = finite_difference(f, x, pass.cutoff, m) +
                         finite_difference(f, x, -pass.cutoff, m);
  total += settled * std::pow(pass.cutoff, -alpha) / alpha;
  return total;
}

}  // namespace

double hypersingular_frac_laplacian(const std::function<double(double)>& f, double x,
                                    double alpha, const HyperSingularConfig& cfg) {
  if (!(alpha > 0.0)) throw validation_error("hypersingular: alpha must be > 0");
  if (cfg.m < 1) throw validation_error("hypersingular: m must be >= 1");
  // the symmetrized difference is O(z^{m+1}) for odd m but only O(z^m) for
  // even m, so the pairing gains one order for odd m only; m = 1, alpha = 1
  // is the classical principal-value form
  const double alpha_limit =
      (cfg.m % 2 == 0) ? static_cast<double>(cfg.m) : static_cast<double>(cfg.m) + 1.0;
  if (!(alpha < alpha_limit))
    throw validation_error("hypersingular: requires alpha < m for even m, < m+1 for odd m");
  if (!(cfg.cutoff > 0.0) || cfg.step_count < 16)
    throw validation_error("hypersingular: cutoff > 0 and step_count >= 16 required");
  if (!(cfg.inner_split > 0.0) || cfg.inner_split >= cfg.cutoff)
    throw validation_error("hypersingular: need 0 < inner_split < cutoff");

  const double dn = dn_constant(1, cfg.m, alpha);

  const HyperPass coarse{cfg.step_count, cfg.cutoff, cfg.taylor_split, 0.01, 16};
  const HyperPass fine{2 * cfg.step_count, 2.0 * cfg.cutoff, 0.5 * cfg.taylor_split,
                       0.006, 24};
  const double a = hyper_integral(f, x, alpha, cfg.m, cfg.inner_split, coarse) / dn;
  const double b = hyper_integral(f, x, alpha, cfg.m, cfg.inner_split, fine) / dn;
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  if (std::abs(a - b) > 10.0 * cfg.rel_tol * scale)
    throw numerical_error("hypersingular: refinement disagreement exceeds 10x rel_tol");
  return b;
}

}  // namespace fracelast
