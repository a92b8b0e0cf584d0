#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracelast/errors.hpp"
#include "fracelast/green.hpp"

using namespace fracelast;

namespace {

ContinuumParams classical() {
  ContinuumParams p;
  p.terms = {{2.0, 1.0}};
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  ContinuumParams p;
  p.terms = {{0.5, 1.0}};  // highest order must exceed 1
  CHECK_THROWS_AS(p.validate(), validation_error);
  p = classical();
  p.density = 0.0;
  CHECK_THROWS_AS(p.validate(), validation_error);
  p = classical();
  p.dimension = 2;
  CHECK_THROWS_AS(p.validate(), validation_error);

  QuadratureConfig q;
  q.rel_tol = 0.5;
  CHECK_THROWS_AS(q.validate(), validation_error);
  q = {};
  q.max_half_periods = 2;
  CHECK_THROWS_AS(q.validate(), validation_error);
}

TEST_CASE("classical 3d Green function is 1/(4 pi r)") {
  const auto p = classical();
  for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const auto g = green_radial(p, r);
    CHECK(g.value == doctest::Approx(1.0 / (4.0 * M_PI * r)).epsilon(1e-6));
    CHECK(std::abs(g.remainder) < 1e-6 * std::abs(g.value));
  }
}

TEST_CASE("gradient-elasticity closed form") {
  // D = c2 k^2 + c4 k^4 with c2 = c4 = 1: G = (1 - e^{-r}) / (4 pi r)
  ContinuumParams p;
  p.terms = {{2.0, 1.0}, {4.0, 1.0}};
  for (double r : {0.01, 0.1, 1.0, 10.0}) {
    const auto g = green_radial(p, r);
    const double exact = (1.0 - std::exp(-r)) / (4.0 * M_PI * r);
    CHECK(g.value == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("linearity in the coefficients") {
  ContinuumParams p;
  p.terms = {{1.5, 0.5}, {2.0, 2.0}};
  ContinuumParams scaled = p;
  for (auto& t : scaled.terms) t.c *= 3.0;
  const double a = green_radial(p, 2.0).value;
  const double b = green_radial(scaled, 2.0).value;
  CHECK(b == doctest::Approx(a / 3.0).epsilon(1e-8));
}

TEST_CASE("displacement scales with f0/rho") {
  auto p = classical();
  p.force_magnitude = 6.0;
  p.density = 2.0;
  const auto u = displacement_point_force(p, 1.5);
  CHECK(u.value == doctest::Approx(3.0 * green_radial(p, 1.5).value).epsilon(1e-12));
  p.force_magnitude = 0.0;
  CHECK(displacement_point_force(p, 1.5).value == doctest::Approx(0.0));
}

TEST_CASE("one-dimensional forms") {
  // regularized difference for the classical line: G(r)-G(r0) = -(r-r0)/2
  const auto p1 = [] {
    ContinuumParams p;
    p.terms = {{2.0, 1.0}};
    p.dimension = 1;
    return p;
  }();
  const auto d = green_radial_diff(p1, 2.0, 1.0);
  CHECK(d.value == doctest::Approx(-0.5).epsilon(1e-7));

  // direct n=1 integral converges when the lowest order is < 1
  ContinuumParams mix = p1;
  mix.terms = {{0.5, 1.0}, {2.0, 1.0}};
  CHECK(std::isfinite(green_radial(mix, 1.0).value));
  // ... and is rejected otherwise
  CHECK_THROWS_AS(green_radial(p1, 1.0), validation_error);
}

TEST_CASE("far-field series: leading constant and matching") {
  ContinuumParams p;
  p.terms = {{1.5, 1.0}, {2.0, 0.1}};
  const double alpha = 1.5;
  const double c0 = std::tgamma(2.0 - alpha) * std::sin(M_PI * alpha / 2.0) /
                    (2.0 * M_PI * M_PI);
  const double r = 1e3;
  const auto far = farfield_series(p, r, 8);
  CHECK(far.term_values[0] == doctest::Approx(c0 / std::pow(r, 3.0 - alpha)).epsilon(1e-12));
  const auto quad = displacement_point_force(p, r);
  CHECK(quad.value == doctest::Approx(far.value).epsilon(0.01));

  // requires exactly {alpha < 2, 2}
  ContinuumParams bad;
  bad.terms = {{2.0, 1.0}, {2.5, 1.0}};
  CHECK_THROWS_AS(farfield_series(bad, 10.0, 4), validation_error);
}

TEST_CASE("near-field branches") {
  // 2 < alpha < 3: u ~ C r^{alpha-3}, independent of c2
  ContinuumParams p;
  p.terms = {{2.0, 0.1}, {2.5, 1.0}};
  const double r = 1e-4;
  const double u = nearfield_gradient(p, r);
  const double expect = std::tgamma(2.0 - 2.5) * std::sin(M_PI * 2.5 / 2.0) /
                        (2.0 * M_PI * M_PI) * std::pow(r, -0.5);
  CHECK(u == doctest::Approx(expect).epsilon(1e-12));
  ContinuumParams p2 = p;
  p2.terms[0].c = 0.4;
  CHECK(nearfield_gradient(p2, r) == doctest::Approx(u));

  // alpha > 3: finite u(0)
  ContinuumParams q;
  q.terms = {{2.0, 0.1}, {3.5, 1.0}};
  const double a = 3.5, c2 = 0.1, ca = 1.0;
  const double u0 = 1.0 / (2.0 * M_PI * (a - 2.0) *
                           std::pow(c2, (a - 3.0) / (a - 2.0)) *
                           std::pow(ca, 1.0 / (a - 2.0)) *
                           std::sin(M_PI / (a - 2.0)));
  CHECK(nearfield_gradient(q, 0.0) == doctest::Approx(u0).epsilon(1e-12));

  ContinuumParams deg;
  deg.terms = {{2.0, 0.1}, {3.0, 1.0}};
  CHECK_THROWS_AS(nearfield_gradient(deg, 0.1), validation_error);
}

TEST_CASE("accelerated value is bracketed by the window partial sums") {
  ContinuumParams p;
  p.terms = {{1.5, 1.0}, {2.0, 0.1}};
  detail::OscillatoryTrace trace;
  const auto g = detail::green_radial_traced(p, 50.0, {}, &trace);
  REQUIRE(trace.partial_sums.size() >= 4);
  double lo = trace.partial_sums[0], hi = trace.partial_sums[0];
  for (double s : trace.partial_sums) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double pref = 1.0 / (2.0 * M_PI * M_PI * 50.0);
  CHECK(g.value >= pref * lo - 1e-15);
  CHECK(g.value <= pref * hi + 1e-15);
}

TEST_CASE("tolerance refinement is consistent") {
  ContinuumParams p;
  p.terms = {{1.5, 1.0}, {2.0, 1.0}};
  QuadratureConfig loose, tight;
  loose.rel_tol = 1e-6;
  tight.rel_tol = 1e-11;
  const double a = green_radial(p, 3.0, loose).value;
  const double b = green_radial(p, 3.0, tight).value;
  CHECK(std::abs(a - b) / std::abs(b) < 1e-6);
}

TEST_CASE("non-convergence raises the numerical diagnostic") {
  ContinuumParams p;
  p.terms = {{0.5, 1.0}, {2.0, 1.0}};
  QuadratureConfig q;
  q.max_half_periods = 8;
  CHECK_THROWS_AS(green_radial(p, 100.0, q), numerical_error);
}

TEST_CASE("convolution with a narrow source approaches the point force") {
  ContinuumParams p = classical();
  const double sigma = 0.05;
  GridField src;
  src.spacing = sigma / 8.0;
  src.origin = 0.0;
  src.samples.resize(64);
  double total = 0.0;
  for (std::size_t i = 0; i < src.samples.size(); ++i) {
    const double r = src.x(i);
    src.samples[i] = std::exp(-0.5 * r * r / (sigma * sigma));
    total += 4.0 * M_PI * r * r * src.samples[i] * src.spacing;
  }
  for (auto& v : src.samples) v /= total;  // unit net force

  const std::vector<double> r_eval = {1.0, 2.0};
  const auto u = displacement_field_convolution(src, p, {}, r_eval);
  for (std::size_t i = 0; i < r_eval.size(); ++i) {
    const auto point = displacement_point_force(p, r_eval[i]);
    CHECK(u[i] == doctest::Approx(point.value).epsilon(0.01));
  }

  // zero source, and linearity
  GridField zero = src;
  for (auto& v : zero.samples) v = 0.0;
  const auto uz = displacement_field_convolution(zero, p, {}, r_eval);
  for (double v : uz) CHECK(v == doctest::Approx(0.0));
  GridField twice = src;
  for (auto& v : twice.samples) v *= 2.0;
  const auto u2 = displacement_field_convolution(twice, p, {}, r_eval);
  for (std::size_t i = 0; i < r_eval.size(); ++i)
    CHECK(u2[i] == doctest::Approx(2.0 * u[i]).epsilon(1e-10));
}
