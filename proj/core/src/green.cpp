#include "fracelast/green.hpp"

#include <cmath>
#include <cstddef>
#include <functional>

#include "fracelast/errors.hpp"
#include "fracelast/quadrature.hpp"

namespace fracelast {

void ContinuumParams::validate() const {
  if (!(density > 0.0)) throw validation_error("ContinuumParams: density must be > 0");
  if (dimension != 1 && dimension != 3)
    throw validation_error("ContinuumParams: dimension must be 1 or 3");
  if (terms.empty()) throw validation_error("ContinuumParams: at least one term required");
  double prev = 0.0;
  for (const auto& t : terms) {
    if (!(t.alpha > 0.0)) throw validation_error("ContinuumParams: orders must be > 0");
    if (!(t.alpha > prev))
      throw validation_error("ContinuumParams: orders must be strictly increasing");
    prev = t.alpha;
  }
  if (!(terms.back().alpha > 1.0) || terms.back().c == 0.0)
    throw validation_error(
        "ContinuumParams: solvability requires highest order > 1 with nonzero coefficient");
}

double ContinuumParams::multiplier(double lambda) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.c * std::pow(lambda, t.alpha);
  return sum;
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || rel_tol > 1e-2)
    throw validation_error("QuadratureConfig: rel_tol must be in (0, 1e-2]");
  if (max_half_periods < 8)
    throw validation_error("QuadratureConfig: max_half_periods must be >= 8");
  if (small_lambda_panels < 4)
    throw validation_error("QuadratureConfig: small_lambda_panels must be >= 4");
}

namespace {

const GaussLegendre& rule24() {
  static const GaussLegendre rule(24);
  return rule;
}

// Integral over [0, inf) of an integrand whose sign pattern settles into
// half-period alternation: panel j covers [first_end + (j-1)p, first_end + jp]
// for j >= 1; the first panel [start, first_end] is graded dyadically toward
// start when graded is set.  Raw summation runs until the panel terms
// alternate and decrease for 8 consecutive panels, then windows of partial
// sums are fed to the alternating-series accelerator.
struct OscProblem {
  std::function<double(double)> f;
  double start = 0.0;
  double first_end = 0.0;
  double period = 0.0;
  bool graded = true;
};

GreenValue osc_integrate(const OscProblem& prob, const QuadratureConfig& cfg,
                         detail::OscillatoryTrace* trace) {
  cfg.validate();
  GreenValue out;

  double sum = 0.0;
  if (prob.graded) {
    double hi = prob.first_end;
    for (int d = 0; d < cfg.small_lambda_panels; ++d) {
      const double lo = prob.start + (hi - prob.start) * 0.5;
      sum += rule24().integrate(prob.f, lo, hi);
      hi = lo;
    }
    // the innermost sliver is integrable (lambda^{1-alpha_min} or better)
    // and geometrically negligible at depth small_lambda_panels
  } else {
    sum += rule24().integrate(prob.f, prob.start, prob.first_end);
  }

  double prev_term = 0.0;
  int streak = 0;
  int tiny_streak = 0;
  bool accelerating = false;
  constexpr int window_size = 64;
  std::vector<double> window;
  window.reserve(window_size);

  for (int j = 1; j <= cfg.max_half_periods; ++j) {
    const double a = prob.first_end + static_cast<double>(j - 1) * prob.period;
    const double term = rule24().integrate(prob.f, a, a + prob.period);
    sum += term;
    out.half_periods = j;

    if (std::abs(term) <= 1e-3 * cfg.rel_tol * std::abs(sum)) {
      if (++tiny_streak >= 4 && !accelerating) {
        out.value = sum;
        out.remainder = std::abs(term);
        return out;
      }
    } else {
      tiny_streak = 0;
    }

    if (!accelerating) {
      if (j > 1 && term * prev_term < 0.0 && std::abs(term) < std::abs(prev_term))
        ++streak;
      else
        streak = 0;
      prev_term = term;
      if (streak >= 8) {
        if (cfg.acceleration == OscAcceleration::none) {
          // raw truncation: run until terms are below tolerance
          if (std::abs(term) <= cfg.rel_tol * std::abs(sum)) {
            out.value = sum;
            out.remainder = std::abs(term);
            return out;
          }
          streak = 7;  // keep monitoring
          continue;
        }
        accelerating = true;
        window.clear();
      }
      continue;
    }

    window.push_back(sum);
    if (static_cast<int>(window.size()) == window_size) {
      const AcceleratedSum acc = accelerate_alternating(window);
      if (acc.remainder <= cfg.rel_tol * std::max(std::abs(acc.value), 1e-300)) {
        if (trace) trace->partial_sums = window;
        out.value = acc.value;
        out.remainder = acc.remainder;
        return out;
      }
      window.clear();
    }
  }

  if (cfg.acceleration != OscAcceleration::none && window.size() >= 2) {
    const AcceleratedSum acc = accelerate_alternating(window);
    if (acc.remainder <= cfg.rel_tol * std::max(std::abs(acc.value), 1e-300)) {
      if (trace) trace->partial_sums = window;
      out.value = acc.value;
      out.remainder = acc.remainder;
      return out;
    }
  }
  throw numerical_error(
      "green: oscillatory quadrature did not converge within max_half_periods");
}

GreenValue green_radial_impl(const ContinuumParams& params, double r,
                             const QuadratureConfig& cfg,
                             detail::OscillatoryTrace* trace) {
  params.validate();
  if (!(r > 0.0))
    throw validation_error("green_radial: r must be > 0 (use nearfield_gradient at 0)");

  OscProblem prob;
  double prefactor;
  if (params.dimension == 3) {
    prob.f = [&params, r](double lam) {
      return lam * std::sin(lam * r) / params.multiplier(lam);
    };
    prob.first_end = M_PI / r;
    prob.period = M_PI / r;
    prefactor = 1.0 / (2.0 * M_PI * M_PI * r);
  } else {
    if (!(params.terms.front().alpha < 1.0))
      throw validation_error(
          "green_radial: n=1 diverges at lambda=0 for lowest order >= 1; "
          "use green_radial_diff");
    prob.f = [&params, r](double lam) {
      return std::cos(lam * r) / params.multiplier(lam);
    };
    prob.first_end = M_PI / (2.0 * r);
    prob.period = M_PI / r;
    prefactor = 1.0 / M_PI;
  }
  GreenValue v = osc_integrate(prob, cfg, trace);
  v.value *= prefactor;
  v.remainder *= std::abs(prefactor);
  return v;
}

}  // namespace

GreenValue green_radial(const ContinuumParams& params, double r,
                        const QuadratureConfig& cfg) {
  return green_radial_impl(params, r, cfg, nullptr);
}

GreenValue detail::green_radial_traced(const ContinuumParams& params, double r,
                                       const QuadratureConfig& cfg,
                                       detail::OscillatoryTrace* trace) {
  return green_radial_impl(params, r, cfg, trace);
}

GreenValue green_radial_diff(const ContinuumParams& params, double r, double r_ref,
                             const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  if (params.dimension != 1)
    throw validation_error("green_radial_diff: defined for dimension 1");
  if (!(r > 0.0) || !(r_ref > 0.0))
    throw validation_error("green_radial_diff: radii must be > 0");

  // [0, split]: combined difference kernel (the lambda -> 0 divergences
  // cancel), resolved by panels no wider than a half period of the faster
  // oscillation plus dyadic grading at 0.
  const double rmax = std::max(r, r_ref);
  const double split = 1.0;
  const auto diff = [&](double lam) {
    return (std::cos(lam * r) - std::cos(lam * r_ref)) / params.multiplier(lam);
  };
  const double width = std::min(split, M_PI / (2.0 * rmax));
  double value = 0.0;
  double hi = width;
  for (int d = 0; d < cfg.small_lambda_panels; ++d) {
    const double lo = 0.5 * hi;
    value += rule24().integrate(diff, lo, hi);
    hi = lo;
  }
  for (double lo = width; lo < split; lo += width)
    value += rule24().integrate(diff, lo, std::min(lo + width, split));

  // oscillatory tails from split, one frequency each
  GreenValue out;
  double remainder = 0.0;
  int half_periods = 0;
  const double sign[2] = {1.0, -1.0};
  const double radius[2] = {r, r_ref};
  for (int i = 0; i < 2; ++i) {
    OscProblem prob;
    const double ri = radius[i];
    prob.f = [&params, ri](double lam) {
      return std::cos(lam * ri) / params.multiplier(lam);
    };
    prob.start = split;
    prob.first_end = split + M_PI / (2.0 * ri);
    prob.period = M_PI / ri;
    prob.graded = false;
    const GreenValue tail = osc_integrate(prob, cfg, nullptr);
    value += sign[i] * tail.value;
    remainder += tail.remainder;
    half_periods = std::max(half_periods, tail.half_periods);
  }
  out.value = value / M_PI;
  out.remainder = remainder / M_PI;
  out.half_periods = half_periods;
  return out;
}

GreenValue displacement_point_force(const ContinuumParams& params, double r,
                                    const QuadratureConfig& cfg) {
  GreenValue v = green_radial(params, r, cfg);
  const double scale = params.force_magnitude / params.density;
  v.value *= scale;
  v.remainder *= std::abs(scale);
  return v;
}

FarfieldResult farfield_series(const ContinuumParams& params, double r, int k_max) {
  params.validate();
  if (!(r > 0.0)) throw validation_error("farfield_series: r must be > 0");
  if (k_max < 0) throw validation_error("farfield_series: k_max must be >= 0");
  if (params.terms.size() != 2 || params.terms[1].alpha != 2.0 ||
      !(params.terms[0].alpha < 2.0))
    throw validation_error(
        "farfield_series: requires exactly the terms {alpha < 2, 2}");
  const double alpha = params.terms[0].alpha;
  const double c_alpha = params.terms[0].c;
  const double c2 = params.terms[1].c;
  const double f0 = params.force_magnitude;
  const double rho = params.density;

  FarfieldResult out;
  const double c0 = f0 * std::tgamma(2.0 - alpha) * std::sin(M_PI * alpha / 2.0) /
                    (2.0 * M_PI * M_PI * rho * c_alpha);
  double term = c0 * std::pow(r, alpha - 3.0);
  out.term_values.push_back(term);
  double value = term;
  double prev_mag = std::abs(term);
  int used = 1;
  for (int k = 1; k <= k_max; ++k) {
    const double s = (2.0 - alpha) * static_cast<double>(k + 1);
    // int_0^inf z^{s-1} sin z dz = Gamma(s) sin(pi s/2) by analytic
    // continuation; vanishes (continuation zero) at even integer s where the
    // raw integral representation breaks down
    const double integral = std::tgamma(s) * std::sin(M_PI * s / 2.0);
    const double ck = -f0 * std::pow(c2, k) /
                      (2.0 * M_PI * M_PI * rho * std::pow(c_alpha, k + 1)) * integral;
    const double tk = ck * std::pow(r, -((2.0 - alpha) * (k + 1) + 1.0));
    out.term_values.push_back(tk);
    if (std::abs(tk) >= prev_mag) {  // asymptotic series: optimal truncation
      out.truncated_early = true;
      break;
    }
    value += tk;
    prev_mag = std::abs(tk);
    used = k + 1;
  }
  out.value = value;
  out.terms_used = used;
  return out;
}

double nearfield_gradient(const ContinuumParams& params, double r) {
  params.validate();
  // r = 0 is allowed for alpha > 3, where u(0) is finite and r-independent
  if (!(r >= 0.0)) throw validation_error("nearfield_gradient: r must be >= 0");
  if (params.terms.size() != 2 || params.terms[0].alpha != 2.0)
    throw validation_error("nearfield_gradient: requires the terms {2, alpha > 2}");
  const double alpha = params.terms[1].alpha;
  const double c2 = params.terms[0].c;
  const double c_alpha = params.terms[1].c;
  const double f0 = params.force_magnitude;
  const double rho = params.density;
  if (!(alpha > 2.0)) throw validation_error("nearfield_gradient: requires alpha > 2");
  if (std::abs(alpha - 3.0) < 1e-9)
    throw validation_error("nearfield_gradient: alpha = 3 is degenerate");

  if (alpha < 3.0) {
    if (!(r > 0.0))
      throw validation_error("nearfield_gradient: r must be > 0 for 2 < alpha < 3");
    // depends only on c_alpha; analytic continuation of the far-field C0
    const double c = f0 * std::tgamma(2.0 - alpha) * std::sin(M_PI * alpha / 2.0) /
                     (2.0 * M_PI * M_PI * rho * c_alpha);
    return c * std::pow(r, alpha - 3.0);
  }
  const double p = alpha - 2.0;
  const double s = std::sin(M_PI / p);
  if (std::abs(s) < 1e-12)
    throw validation_error("nearfield_gradient: sin pole in the alpha > 3 constant");
  return f0 / (2.0 * M_PI * p * rho * std::pow(c2, (alpha - 3.0) / p) *
               std::pow(c_alpha, 1.0 / p) * s);
}

std::vector<double> displacement_field_convolution(const GridField& source,
                                                   const ContinuumParams& params,
                                                   const QuadratureConfig& cfg,
                                                   const std::vector<double>& r_eval) {
  source.validate();
  params.validate();
  if (params.dimension != 3)
    throw validation_error("displacement_field_convolution: radial form requires n=3");
  if (source.origin < 0.0)
    throw validation_error("displacement_field_convolution: radial grid must start at r >= 0");

  static const GaussLegendre inner_rule(16);
  const auto green = [&](double s) { return green_radial(params, s, cfg).value; };

  std::vector<double> out;
  out.reserve(r_eval.size());
  const std::size_t p = source.size();
  for (double r : r_eval) {
    if (!(r > 0.0))
      throw validation_error("displacement_field_convolution: evaluation radii must be > 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double fp = source.samples[i];
      if (fp == 0.0) continue;
      const double rp = source.x(i);
      if (rp <= 0.0) continue;
      const double w =
          (i == 0 || i + 1 == p) ? 0.5 * source.spacing : source.spacing;
      // angular integral: int_{|r-rp|}^{r+rp} s G(s) ds
      const double lo = std::abs(r - rp);
      const double hi = r + rp;
      const double shell =
          inner_rule.integrate([&](double s) { return s * green(s); }, lo, hi);
      acc += w * rp * fp * shell;
    }
    out.push_back(2.0 * M_PI * acc / (params.density * r));
  }
  return out;
}

}  // namespace fracelast
