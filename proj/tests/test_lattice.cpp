#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fracelast/errors.hpp"
#include "fracelast/lattice.hpp"

using namespace fracelast;

namespace {

LatticeSpec nn_chain(int n, double g = -1.0, double mass = 1.0) {
  LatticeSpec spec;
  spec.kernel.coefficients = {1.0};
  spec.kernel.spacing = 1.0;
  spec.mass = mass;
  spec.coupling = g;
  spec.particle_count = n;
  return spec;
}

LatticeState zero_state(int n) {
  LatticeState s;
  s.displacements.assign(static_cast<std::size_t>(n), 0.0);
  s.velocities.assign(static_cast<std::size_t>(n), 0.0);
  return s;
}

}  // namespace

TEST_CASE("uniform translation produces no force") {
  const auto spec = nn_chain(32);
  auto state = zero_state(32);
  for (auto& u : state.displacements) u = 0.37;
  const auto acc = acceleration(spec, state, {});
  for (double a : acc) CHECK(a == 0.0);
}

TEST_CASE("translation invariance of the acceleration") {
  auto spec = nn_chain(24);
  spec.kernel.coefficients = {1.0, 0.25};
  auto state = zero_state(24);
  for (int i = 0; i < 24; ++i)
    state.displacements[static_cast<std::size_t>(i)] = std::sin(0.9 * i) * 0.1;
  const auto a0 = acceleration(spec, state, {});
  for (auto& u : state.displacements) u += 5.0;
  const auto a1 = acceleration(spec, state, {});
  for (std::size_t i = 0; i < a0.size(); ++i)
    CHECK(a0[i] == doctest::Approx(a1[i]).epsilon(1e-12));
}

TEST_CASE("single displaced site, nearest neighbors") {
  // g = -kappa convention: restoring force -2 kappa delta / M on the site
  const double kappa = 2.0, delta = 0.1, mass = 1.5;
  const auto spec = nn_chain(16, -kappa, mass);
  auto state = zero_state(16);
  state.displacements[8] = delta;
  const auto acc = acceleration(spec, state, {});
  CHECK(acc[8] == doctest::Approx(-2.0 * kappa * delta / mass).epsilon(1e-14));
  CHECK(acc[7] == doctest::Approx(kappa * delta / mass).epsilon(1e-14));
  CHECK(acc[9] == doctest::Approx(kappa * delta / mass).epsilon(1e-14));
  CHECK(acc[5] == doctest::Approx(0.0));
}

TEST_CASE("plane waves diagonalize the force operator") {
  const int n = 256;
  auto spec = nn_chain(n);
  spec.kernel.coefficients = {1.0, 0.3, -0.05};
  auto state = zero_state(n);
  const double k = 2.0 * M_PI * 5.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i)
    state.displacements[static_cast<std::size_t>(i)] = std::cos(k * i);
  const auto acc = acceleration(spec, state, {});
  const double w2 = -spec.coupling * eval_lattice_dispersion(spec.kernel, k) / spec.mass;
  for (int i = 0; i < n; ++i)
    CHECK(acc[static_cast<std::size_t>(i)] ==
          doctest::Approx(-w2 * state.displacements[static_cast<std::size_t>(i)])
              .epsilon(1e-10));
}

TEST_CASE("internal forces conserve momentum") {
  auto spec = nn_chain(64);
  spec.kernel.coefficients = {1.0, 0.2, 0.05, 0.01};
  auto state = zero_state(64);
  for (int i = 0; i < 64; ++i)
    state.displacements[static_cast<std::size_t>(i)] = std::sin(1.7 * i + 0.3);
  const auto acc = acceleration(spec, state, {});
  double total = 0.0, scale = 0.0;
  for (double a : acc) {
    total += spec.mass * a;
    scale += std::abs(spec.mass * a);
  }
  CHECK(std::abs(total) <= 1e-12 * scale);
}

TEST_CASE("kernel range must fit the periodic ring") {
  auto spec = nn_chain(8);
  spec.kernel.coefficients.assign(4, 0.1);  // n_max = N/2 not allowed
  CHECK_THROWS_AS(acceleration(spec, zero_state(8), {}), validation_error);
}

TEST_CASE("energy of simple configurations") {
  const auto spec = nn_chain(16);
  CHECK(total_energy(spec, zero_state(16)) == 0.0);

  // one site displaced: V = -(g/2) K(1) [(delta)^2 + (delta)^2] = -g delta^2
  auto state = zero_state(16);
  state.displacements[4] = 0.2;
  CHECK(total_energy(spec, state) == doctest::Approx(0.04).epsilon(1e-14));

  state.velocities[3] = 2.0;
  CHECK(total_energy(spec, state) == doctest::Approx(0.04 + 2.0).epsilon(1e-14));
}

TEST_CASE("energy gradient matches the force") {
  auto spec = nn_chain(16);
  spec.kernel.coefficients = {1.0, 0.25};
  auto state = zero_state(16);
  for (int i = 0; i < 16; ++i)
    state.displacements[static_cast<std::size_t>(i)] = 0.1 * std::cos(0.8 * i);
  const auto acc = acceleration(spec, state, {});
  const double h = 1e-6;
  for (int i = 0; i < 16; i += 3) {
    auto plus = state, minus = state;
    plus.displacements[static_cast<std::size_t>(i)] += h;
    minus.displacements[static_cast<std::size_t>(i)] -= h;
    const double grad =
        (total_energy(spec, plus) - total_energy(spec, minus)) / (2.0 * h);
    CHECK(grad == doctest::Approx(-spec.mass * acc[static_cast<std::size_t>(i)])
                      .epsilon(1e-7));
  }
}

TEST_CASE("velocity Verlet: fixed point, stability guard, frequency") {
  const int n = 64;
  const auto spec = nn_chain(n);
  const double wmax = max_frequency(spec);
  CHECK(wmax == doctest::Approx(2.0).epsilon(1e-4));  // NN band edge

  // zero state stays put
  auto s = step_dynamics(spec, zero_state(n), {}, 0.1);
  for (double u : s.displacements) CHECK(u == 0.0);
  CHECK(s.time == doctest::Approx(0.1));

  // dt * omega_max >= 2 rejected
  CHECK_THROWS_AS(step_dynamics(spec, zero_state(n), {}, 1.01), numerical_error);

  // single-mode oscillation frequency via the three-term cosine recurrence
  const int mode = 3;
  const double k = 2.0 * M_PI * mode / static_cast<double>(n);
  const double omega = std::sqrt(eval_lattice_dispersion(spec.kernel, k));
  auto state = zero_state(n);
  for (int i = 0; i < n; ++i)
    state.displacements[static_cast<std::size_t>(i)] = 0.01 * std::cos(k * i);
  const double dt = 0.05 / omega;
  const int periods = 100;
  const auto steps = static_cast<int>(periods * 2.0 * M_PI / (omega * dt));
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(steps) + 1);
  trace.push_back(state.displacements[0]);
  for (int it = 0; it < steps; ++it) {
    state = step_dynamics(spec, state, {}, dt, BoundaryMode::periodic, wmax);
    trace.push_back(state.displacements[0]);
  }
  // least squares for cos(w dt) in s_{i+1} + s_{i-1} = 2 cos(w dt) s_i
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    num += trace[i] * (trace[i + 1] + trace[i - 1]);
    den += 2.0 * trace[i] * trace[i];
  }
  const double measured = std::acos(num / den) / dt;
  CHECK(measured == doctest::Approx(omega).epsilon(1e-3));
}

TEST_CASE("energy drift stays bounded and non-secular") {
  const int n = 256;
  const auto spec = nn_chain(n);
  const double wmax = max_frequency(spec);
  auto state = zero_state(n);
  const double k = 2.0 * M_PI * 7.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i)
    state.displacements[static_cast<std::size_t>(i)] = 0.02 * std::cos(k * i);
  const double e0 = total_energy(spec, state);
  const double dt = 0.1 / wmax;
  const int steps = 10000;
  std::vector<double> ts, es;
  for (int it = 0; it < steps; ++it) {
    state = step_dynamics(spec, state, {}, dt, BoundaryMode::periodic, wmax);
    if (it % 10 == 0) {
      ts.push_back(state.time);
      es.push_back(total_energy(spec, state));
    }
  }
  double worst = 0.0;
  for (double e : es) worst = std::max(worst, std::abs(e - e0) / e0);
  CHECK(worst < 1e-2);  // bounded oscillation, O((w dt)^2)
  // linear trend over the window: secular part only
  const double npts = static_cast<double>(ts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sx += ts[i]; sy += es[i]; sxx += ts[i] * ts[i]; sxy += ts[i] * es[i];
  }
  const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  CHECK(std::abs(slope * ts.back()) / e0 < 1e-6);
}

TEST_CASE("statics: trivial and piecewise-linear solutions") {
  const int n = 64;
  const auto spec = nn_chain(n);

  ExternalForce zero;
  const auto u0 = solve_static(spec, zero);
  for (double u : u0) CHECK(u == doctest::Approx(0.0));

  // balanced dipole on the ring: profile linear away from the two sources
  ExternalForce dip;
  dip.values.assign(n, 0.0);
  dip.values[n / 4] = 1.0;
  dip.values[3 * n / 4] = -1.0;
  const auto u = solve_static(spec, dip);
  for (int i = 0; i < n; ++i) {
    if (i == n / 4 || i == 3 * n / 4) continue;
    const double second = u[static_cast<std::size_t>((i + 1) % n)] -
                          2.0 * u[static_cast<std::size_t>(i)] +
                          u[static_cast<std::size_t>((i + n - 1) % n)];
    CHECK(std::abs(second) < 1e-10);
  }

  // fixed boundary, point force at the center: tent profile
  StaticOptions fixed;
  fixed.boundary = BoundaryMode::fixed;
  ExternalForce point;
  point.values.assign(n, 0.0);
  point.values[n / 2] = 1.0;
  const auto ut = solve_static(spec, point, fixed);
  for (int i = 1; i < n - 1; ++i) {
    if (i == n / 2) continue;
    const double second = ut[static_cast<std::size_t>(i + 1)] -
                          2.0 * ut[static_cast<std::size_t>(i)] +
                          ut[static_cast<std::size_t>(i - 1)];
    CHECK(std::abs(second) < 1e-10);
  }
  CHECK(ut[n / 2] > 0.0);
}

TEST_CASE("statics: iterative path agrees with the dense solver") {
  const int n = 256;
  auto spec = nn_chain(n);
  spec.kernel.coefficients = {1.0, 0.2, 0.04};
  ExternalForce dip;
  dip.values.assign(n, 0.0);
  dip.values[40] = 1.0;
  dip.values[200] = -1.0;
  const auto dense = solve_static(spec, dip);
  StaticOptions iter;
  iter.dense_limit = 64;  // force the CG path
  const auto cg = solve_static(spec, dip, iter);
  for (std::size_t i = 0; i < dense.size(); ++i)
    CHECK(std::abs(dense[i] - cg[i]) < 1e-7);
}

TEST_CASE("statics diagnostics") {
  const auto spec = nn_chain(32);
  ExternalForce bad;
  bad.values.assign(32, 0.0);
  bad.values[5] = 1.0;  // unbalanced
  StaticOptions nopin;
  nopin.pinned_site = -1;
  CHECK_THROWS_AS(solve_static(spec, bad, nopin), numerical_error);
}
