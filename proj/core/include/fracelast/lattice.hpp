#pragma once

#include <vector>

#include "fracelast/dispersion.hpp"

namespace fracelast {

enum class BoundaryMode {
  periodic,  // wrap interactions around the ring
  fixed,     // sites outside [0, N) held at zero displacement
};

struct LatticeState {
  std::vector<double> displacements;
  std::vector<double> velocities;
  double time = 0.0;

  void validate(const LatticeSpec& spec) const;
};

struct ExternalForce {
  std::vector<double> values;  // F(n), length N (empty means zero)
};

// a_n = [g sum_{m != n} K(n-m)(u_n - u_m) + F(n)] / M over the truncated
// kernel range.  Requires n_max < N/2 in periodic mode.
std::vector<double> acceleration(const LatticeSpec& spec, const LatticeState& state,
                                 const ExternalForce& force,
                                 BoundaryMode boundary = BoundaryMode::periodic);

// sqrt(max omega^2) over a Brillouin-zone sample; used for the velocity
// Verlet stability bound dt*omega_max < 2.
double max_frequency(const LatticeSpec& spec, int samples = 1024);

// One velocity-Verlet step.  Throws numerical_error when dt*omega_max >= 2.
// Pass omega_max from max_frequency to avoid recomputing it per step; a
// non-positive value requests the internal estimate.
LatticeState step_dynamics(const LatticeSpec& spec, const LatticeState& state,
                           const ExternalForce& force, double dt,
                           BoundaryMode boundary = BoundaryMode::periodic,
                           double omega_max = -1.0);

// E = sum_n M v_n^2 / 2 - (g/4) sum_{n != m} K(n-m)(u_n - u_m)^2
double total_energy(const LatticeSpec& spec, const LatticeState& state,
                    BoundaryMode boundary = BoundaryMode::periodic);

struct StaticOptions {
  BoundaryMode boundary = BoundaryMode::periodic;
  // Zero-mode gauge: displacement pinned to 0 at this site (periodic mode).
  // Negative value: no pin; the force must then be balanced and the solution
  // is returned in the mean-zero gauge.
  int pinned_site = 0;
  double rel_residual = 1e-10;
  int max_iterations = 50000;
  // Dense Cholesky at or below this size, preconditioned CG above it.
  int dense_limit = 4096;
};

// Solves g sum K(n-m)(u_n - u_m) + F(n) = 0.  Throws numerical_error when
// the gauge-reduced system is singular/indefinite or CG fails to converge.
std::vector<double> solve_static(const LatticeSpec& spec, const ExternalForce& force,
                                 const StaticOptions& options = {});

}  // namespace fracelast
