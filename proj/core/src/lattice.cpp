#include "fracelast/lattice.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>

#include "fracelast/errors.hpp"
#include "fracelast/fft.hpp"

namespace fracelast {

void LatticeState::validate(const LatticeSpec& spec) const {
  if (displacements.size() != static_cast<std::size_t>(spec.particle_count) ||
      velocities.size() != static_cast<std::size_t>(spec.particle_count))
    throw validation_error("LatticeState: length mismatch with LatticeSpec");
}

namespace {

void check_truncation(const LatticeSpec& spec, BoundaryMode boundary) {
  if (boundary == BoundaryMode::periodic &&
      spec.kernel.n_max() >= spec.particle_count / 2)
    throw validation_error("lattice: kernel n_max must be < N/2 for periodic wrap");
}

const std::vector<double>& zero_force(std::size_t n) {
  static thread_local std::vector<double> z;
  if (z.size() != n) z.assign(n, 0.0);
  return z;
}

}  // namespace

std::vector<double> acceleration(const LatticeSpec& spec, const LatticeState& state,
                                 const ExternalForce& force, BoundaryMode boundary) {
  spec.validate();
  state.validate(spec);
  check_truncation(spec, boundary);
  const int n_count = spec.particle_count;
  const int n_max = spec.kernel.n_max();
  const auto& u = state.displacements;
  const auto& f =
      force.values.empty() ? zero_force(static_cast<std::size_t>(n_count)) : force.values;
  if (f.size() != static_cast<std::size_t>(n_count))
    throw validation_error("acceleration: force length mismatch");

  std::vector<double> acc(static_cast<std::size_t>(n_count));
  for (int n = 0; n < n_count; ++n) {
    double sum = 0.0;
    for (int j = 1; j <= n_max; ++j) {
      const double kj = spec.kernel.coefficients[static_cast<std::size_t>(j - 1)];
      double left, right;
      if (boundary == BoundaryMode::periodic) {
        left = u[static_cast<std::size_t>((n - j + n_count) % n_count)];
        right = u[static_cast<std::size_t>((n + j) % n_count)];
      } else {
        left = (n - j >= 0) ? u[static_cast<std::size_t>(n - j)] : 0.0;
        right = (n + j < n_count) ? u[static_cast<std::size_t>(n + j)] : 0.0;
      }
      sum += kj * (2.0 * u[static_cast<std::size_t>(n)] - left - right);
    }
    acc[static_cast<std::size_t>(n)] =
        (spec.coupling * sum + f[static_cast<std::size_t>(n)]) / spec.mass;
  }
  return acc;
}

double max_frequency(const LatticeSpec& spec, int samples) {
  spec.validate();
  double worst = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double theta = M_PI * static_cast<double>(i) / static_cast<double>(samples);
    const double d = eval_lattice_dispersion(spec.kernel, theta / spec.kernel.spacing);
    worst = std::max(worst, -spec.coupling * d / spec.mass);
  }
  return std::sqrt(std::max(worst, 0.0));
}

LatticeState step_dynamics(const LatticeSpec& spec, const LatticeState& state,
                           const ExternalForce& force, double dt, BoundaryMode boundary,
                           double omega_max) {
  if (!(dt > 0.0)) throw validation_error("step_dynamics: dt must be > 0");
  if (omega_max <= 0.0) omega_max = max_frequency(spec);
  if (dt * omega_max >= 2.0)
    throw numerical_error("step_dynamics: dt*omega_max >= 2 (unstable)");

  const std::size_t n = state.displacements.size();
  const std::vector<double> a0 = acceleration(spec, state, force, boundary);
  LatticeState next = state;
  for (std::size_t i = 0; i < n; ++i)
    next.displacements[i] += dt * state.velocities[i] + 0.5 * dt * dt * a0[i];
  const std::vector<double> a1 = acceleration(spec, next, force, boundary);
  for (std::size_t i = 0; i < n; ++i)
    next.velocities[i] += 0.5 * dt * (a0[i] + a1[i]);
  next.time = state.time + dt;
  return next;
}

double total_energy(const LatticeSpec& spec, const LatticeState& state,
                    BoundaryMode boundary) {
  spec.validate();
  state.validate(spec);
  check_truncation(spec, boundary);
  const int n_count = spec.particle_count;
  const int n_max = spec.kernel.n_max();
  const auto& u = state.displacements;

  double kinetic = 0.0;
  for (double v : state.velocities) kinetic += 0.5 * spec.mass * v * v;

  // each unordered pair once => -(g/4)*sum_{n!=m} becomes -(g/2)*sum_{bonds}
  double bonds = 0.0;
  for (int n = 0; n < n_count; ++n) {
    for (int j = 1; j <= n_max; ++j) {
      const double kj = spec.kernel.coefficients[static_cast<std::size_t>(j - 1)];
      if (boundary == BoundaryMode::periodic) {
        const double d =
            u[static_cast<std::size_t>(n)] - u[static_cast<std::size_t>((n + j) % n_count)];
        bonds += kj * d * d;
      } else {
        if (n + j < n_count) {
          const double d =
              u[static_cast<std::size_t>(n)] - u[static_cast<std::size_t>(n + j)];
          bonds += kj * d * d;
        } else {
          bonds += kj * u[static_cast<std::size_t>(n)] * u[static_cast<std::size_t>(n)];
        }
        if (n - j < 0)
          bonds += kj * u[static_cast<std::size_t>(n)] * u[static_cast<std::size_t>(n)];
      }
    }
  }
  return kinetic - 0.5 * spec.coupling * bonds;
}

namespace {

// y = B u with B = -g (S I - C), C the symmetric interaction circulant
std::vector<double> apply_operator(const LatticeSpec& spec, const std::vector<double>& u,
                                   BoundaryMode boundary) {
  const int n_count = spec.particle_count;
  const int n_max = spec.kernel.n_max();
  std::vector<double> y(static_cast<std::size_t>(n_count));
  for (int n = 0; n < n_count; ++n) {
    double sum = 0.0;
    for (int j = 1; j <= n_max; ++j) {
      const double kj = spec.kernel.coefficients[static_cast<std::size_t>(j - 1)];
      double left, right;
      if (boundary == BoundaryMode::periodic) {
        left = u[static_cast<std::size_t>((n - j + n_count) % n_count)];
        right = u[static_cast<std::size_t>((n + j) % n_count)];
      } else {
        left = (n - j >= 0) ? u[static_cast<std::size_t>(n - j)] : 0.0;
        right = (n + j < n_count) ? u[static_cast<std::size_t>(n + j)] : 0.0;
      }
      sum += kj * (2.0 * u[static_cast<std::size_t>(n)] - left - right);
    }
    y[static_cast<std::size_t>(n)] = -spec.coupling * sum;
  }
  return y;
}

std::vector<double> solve_dense(const LatticeSpec& spec, const std::vector<double>& f,
                                const StaticOptions& options, int pin) {
  const int n_count = spec.particle_count;
  const int n_max = spec.kernel.n_max();
  const bool periodic = options.boundary == BoundaryMode::periodic;

  double s_full = 0.0;
  for (double k : spec.kernel.coefficients) s_full += 2.0 * k;

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_count, n_count);
  for (int n = 0; n < n_count; ++n) {
    b(n, n) = -spec.coupling * s_full;
    for (int j = 1; j <= n_max; ++j) {
      const double kj = spec.kernel.coefficients[static_cast<std::size_t>(j - 1)];
      if (periodic) {
        b(n, (n + j) % n_count) += spec.coupling * kj;
        b(n, (n - j + n_count) % n_count) += spec.coupling * kj;
      } else {
        if (n + j < n_count) b(n, n + j) += spec.coupling * kj;
        if (n - j >= 0) b(n, n - j) += spec.coupling * kj;
      }
    }
  }

  std::vector<int> keep;
  keep.reserve(static_cast<std::size_t>(n_count));
  for (int n = 0; n < n_count; ++n)
    if (n != pin) keep.push_back(n);
  const int reduced = static_cast<int>(keep.size());

  Eigen::MatrixXd br(reduced, reduced);
  Eigen::VectorXd fr(reduced);
  for (int i = 0; i < reduced; ++i) {
    fr(i) = f[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])];
    for (int j = 0; j < reduced; ++j)
      br(i, j) = b(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(br);
  if (llt.info() != Eigen::Success)
    throw numerical_error("solve_static: reduced system not positive definite");
  const Eigen::VectorXd ur = llt.solve(fr);

  std::vector<double> u(static_cast<std::size_t>(n_count), 0.0);
  for (int i = 0; i < reduced; ++i)
    u[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])] = ur(i);

  const Eigen::VectorXd res = br * ur - fr;
  const double rel = res.norm() / std::max(fr.norm(), 1e-300);
  if (rel > options.rel_residual)
    throw numerical_error("solve_static: dense solve residual above tolerance");
  return u;
}

std::vector<double> solve_cg(const LatticeSpec& spec, const std::vector<double>& f,
                             const StaticOptions& options) {
  const int n_count = spec.particle_count;
  const std::size_t n = static_cast<std::size_t>(n_count);

  // circulant preconditioner: multiplier 1/(-g*D(theta_j)) on nonzero modes
  std::vector<double> inv_symbol(n, 0.0);
  const bool use_fft = is_power_of_two(n);
  if (use_fft) {
    for (std::size_t j = 1; j <= n / 2; ++j) {
      const double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n_count);
      const double d =
          -spec.coupling * eval_lattice_dispersion(spec.kernel, theta / spec.kernel.spacing);
      if (!(d > 0.0))
        throw numerical_error("solve_static: operator not positive on nonzero modes");
      inv_symbol[j] = 1.0 / d;
      inv_symbol[n - j] = 1.0 / d;
    }
  }
  const double diag = -spec.coupling * 2.0 *
                      [&] {
                        double s = 0.0;
                        for (double k : spec.kernel.coefficients) s += k;
                        return s;
                      }();

  const auto remove_mean = [](std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
  };
  const auto precondition = [&](const std::vector<double>& r) {
    std::vector<double> z(n);
    if (use_fft) {
      std::vector<std::complex<double>> spectrum(r.begin(), r.end());
      fft_inplace(spectrum, false);
      for (std::size_t j = 0; j < n; ++j) spectrum[j] *= inv_symbol[j];
      fft_inplace(spectrum, true);
      for (std::size_t j = 0; j < n; ++j) z[j] = spectrum[j].real();
    } else {
      for (std::size_t j = 0; j < n; ++j) z[j] = r[j] / diag;
    }
    remove_mean(z);
    return z;
  };
  const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  std::vector<double> rhs = f;
  remove_mean(rhs);
  const double rhs_norm = std::sqrt(dot(rhs, rhs));

  std::vector<double> u(n, 0.0);
  std::vector<double> r = rhs;
  std::vector<double> z = precondition(r);
  std::vector<double> p = z;
  double rz = dot(r, z);
  for (int it = 0; it < options.max_iterations; ++it) {
    const double rnorm = std::sqrt(dot(r, r));
    if (rnorm <= options.rel_residual * std::max(rhs_norm, 1e-300)) {
      return u;
    }
    std::vector<double> ap = apply_operator(spec, p, options.boundary);
    remove_mean(ap);
    const double alpha = rz / dot(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    z = precondition(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw numerical_error("solve_static: CG failed to converge");
}

}  // namespace

std::vector<double> solve_static(const LatticeSpec& spec, const ExternalForce& force,
                                 const StaticOptions& options) {
  spec.validate();
  check_truncation(spec, options.boundary);
  const std::size_t n = static_cast<std::size_t>(spec.particle_count);
  const auto& f = force.values.empty() ? zero_force(n) : force.values;
  if (f.size() != n) throw validation_error("solve_static: force length mismatch");
  if (options.pinned_site >= spec.particle_count)
    throw validation_error("solve_static: pinned_site out of range");

  if (options.boundary == BoundaryMode::fixed) {
    // fixed ends remove the zero mode; no gauge needed
    if (spec.particle_count > options.dense_limit)
      throw validation_error("solve_static: fixed boundary supported only at dense sizes");
    return solve_dense(spec, f, options, /*pin=*/-1);
  }

  double f_sum = 0.0, f_scale = 0.0;
  for (double v : f) {
    f_sum += v;
    f_scale += std::abs(v);
  }
  const bool balanced = std::abs(f_sum) <= 1e-12 * std::max(f_scale, 1.0);
  if (options.pinned_site < 0 && !balanced)
    throw numerical_error("solve_static: unbalanced force with no pinned site");

  std::vector<double> u;
  if (spec.particle_count <= options.dense_limit) {
    const int pin = options.pinned_site >= 0 ? options.pinned_site : 0;
    u = solve_dense(spec, f, options, pin);
  } else {
    if (!balanced)
      throw validation_error("solve_static: iterative path requires a balanced force");
    u = solve_cg(spec, f, options);
  }

  if (options.pinned_site >= 0) {
    const double shift = u[static_cast<std::size_t>(options.pinned_site)];
    for (double& v : u) v -= shift;
  } else {
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : u) v -= mean;
  }
  return u;
}

}  // namespace fracelast
