#pragma once

#include <span>
#include <vector>

#include "fracelast/dispersion.hpp"
#include "fracelast/green.hpp"
#include "fracelast/lattice.hpp"

namespace fracelast {

// c_j = g a_j dx^{alpha_j} / M, rho = M/dx (unit cross-section).
ContinuumParams map_lattice_to_continuum(const LatticeSpec& spec, const DispersionLaw& law);

struct ConvergenceRow {
  double dx = 0.0;
  int particle_count = 0;
  double err_max = 0.0;  // relative max-norm over the comparison window
  double err_l2 = 0.0;   // relative l2 norm over the window
  double order = 0.0;    // log2(e_{2dx}/e_dx); NaN on the first row
};

struct TruncationRow {
  int n_max = 0;
  double err_max = 0.0;
  double err_l2 = 0.0;
};

struct StudyConfig {
  DispersionLaw law;
  double coupling = -1.0;
  double mass = 1.0;
  double domain_length = 64.0;
  std::vector<int> particle_counts;  // N per level; dx = L/N strictly decreasing
  double nmax_fraction = 0.45;       // kernel truncation n_max = floor(f*N)
  double force_amplitude = 1.0;      // dipole +F0 at L/4, -F0 at 3L/4
  int window_margin = 10;            // cells excluded around sources
  int oversample = 8;                // continuum reference mode oversampling
  // Fixed-dx kernel-truncation refinement (error-floor demonstration);
  // empty disables.  Runs at refinement_particle_count (0 = finest level).
  std::vector<int> refinement_n_max;
  int refinement_particle_count = 0;
  // Use these kernel coefficients at every level instead of synthesizing
  // from the law (e.g. the exact nearest-neighbor chain).
  std::vector<double> explicit_kernel;

  void validate() const;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<TruncationRow> truncation_rows;
  bool monotone = true;  // flag, not an error: noise-floor studies legitimately stall
  StudyConfig config;    // parameter echo
};

// Lattice statics (solve_static with the synthesized kernel) vs the
// periodized continuum field (Fourier series with the mapped power-law
// multiplier on an oversampled mode set) at each refinement level.
ConvergenceReport static_convergence_study(const StudyConfig& config);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

// Least squares through (log x, log y); rejects nonpositive data.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

}  // namespace fracelast
