#include "fracelast/compare.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include "fracelast/errors.hpp"
#include "fracelast/fft.hpp"

namespace fracelast {

ContinuumParams map_lattice_to_continuum(const LatticeSpec& spec,
                                         const DispersionLaw& law) {
  spec.validate();
  law.validate();
  ContinuumParams params;
  params.density = spec.mass / spec.kernel.spacing;  // A = 1
  for (const auto& t : law.terms)
    params.terms.push_back(
        {t.alpha, spec.coupling * t.a * std::pow(spec.kernel.spacing, t.alpha) /
                      spec.mass});
  params.dimension = 1;
  return params;
}

void StudyConfig::validate() const {
  law.validate();
  if (!(mass > 0.0)) throw validation_error("StudyConfig: mass must be > 0");
  if (!(domain_length > 0.0)) throw validation_error("StudyConfig: domain_length must be > 0");
  if (particle_counts.size() < 2)
    throw validation_error("StudyConfig: need at least two refinement levels");
  for (std::size_t i = 1; i < particle_counts.size(); ++i)
    if (particle_counts[i] <= particle_counts[i - 1])
      throw validation_error("StudyConfig: particle counts must increase (dx decreasing)");
  for (int n : particle_counts)
    if (n < 16) throw validation_error("StudyConfig: particle counts must be >= 16");
  if (!(nmax_fraction > 0.0) || nmax_fraction >= 0.5)
    throw validation_error("StudyConfig: nmax_fraction must be in (0, 0.5)");
  if (window_margin < 1) throw validation_error("StudyConfig: window_margin must be >= 1");
  if (oversample < 1) throw validation_error("StudyConfig: oversample must be >= 1");
}

namespace {

struct LevelResult {
  double err_max = 0.0;
  double err_l2 = 0.0;
};

LevelResult run_level(const StudyConfig& cfg, int n_count, int n_max) {
  const double dx = cfg.domain_length / static_cast<double>(n_count);

  LatticeSpec spec;
  if (cfg.explicit_kernel.empty()) {
    SynthesisOptions options;
    // truncation-refinement rows deliberately explore under-resolved
    // kernels; the study reports the error instead of rejecting
    options.enforce_roundtrip = false;
    spec.kernel = synthesize_kernel(cfg.law, dx, n_max, options).kernel;
  } else {
    spec.kernel.coefficients = cfg.explicit_kernel;
    spec.kernel.spacing = dx;
  }
  spec.mass = cfg.mass;
  spec.coupling = cfg.coupling;
  spec.particle_count = n_count;

  const int na = n_count / 4;
  const int nb = 3 * n_count / 4;
  ExternalForce force;
  force.values.assign(static_cast<std::size_t>(n_count), 0.0);
  force.values[static_cast<std::size_t>(na)] = cfg.force_amplitude;
  force.values[static_cast<std::size_t>(nb)] = -cfg.force_amplitude;

  const std::vector<double> u_lat = solve_static(spec, force);

  // periodized continuum reference: Fourier series with the mapped power-law
  // multiplier on an oversample*N mode set, via an inverse FFT on the
  // commensurate fine grid
  const ContinuumParams mapped = map_lattice_to_continuum(spec, cfg.law);
  const double rho = mapped.density;
  const double length = cfg.domain_length;
  std::size_t nf = static_cast<std::size_t>(n_count) * static_cast<std::size_t>(cfg.oversample);
  const double xa = static_cast<double>(na) * dx;
  const double xb = static_cast<double>(nb) * dx;

  std::vector<std::complex<double>> spectrum(nf, {0.0, 0.0});
  for (std::size_t j = 1; j < nf; ++j) {
    const std::ptrdiff_t m = (j <= nf / 2) ? static_cast<std::ptrdiff_t>(j)
                                           : static_cast<std::ptrdiff_t>(j) -
                                                 static_cast<std::ptrdiff_t>(nf);
    const double k = 2.0 * M_PI * static_cast<double>(m) / length;
    // continuous transform of the dipole: f_hat(k) = F0 (e^{-ik xa} - e^{-ik xb})
    const std::complex<double> fhat =
        cfg.force_amplitude *
        (std::exp(std::complex<double>(0.0, -k * xa)) -
         std::exp(std::complex<double>(0.0, -k * xb)));
    const double d = rho * mapped.multiplier(std::abs(k));
    // u(x) = (1/L) sum_m f_hat(k_m)/(rho D(k_m)) e^{i k_m x}
    spectrum[j] = fhat / d * (static_cast<double>(nf) / length);
  }
  const std::vector<double> u_fine = ifft_to_real(std::move(spectrum));

  const std::size_t stride = static_cast<std::size_t>(cfg.oversample);
  const double gauge = u_fine[0];  // pin site 0, matching the lattice gauge

  double err_max = 0.0, err_sq = 0.0, scale = 0.0;
  std::size_t count = 0;
  for (int n = na + cfg.window_margin; n < nb - cfg.window_margin; ++n) {
    const double uc = u_fine[static_cast<std::size_t>(n) * stride] - gauge;
    const double e = std::abs(u_lat[static_cast<std::size_t>(n)] - uc);
    err_max = std::max(err_max, e);
    err_sq += e * e;
    scale = std::max(scale, std::abs(uc));
    ++count;
  }
  if (count == 0 || scale == 0.0)
    throw numerical_error("static_convergence_study: empty or degenerate window");
  return {err_max / scale, std::sqrt(err_sq / static_cast<double>(count)) / scale};
}

}  // namespace

ConvergenceReport static_convergence_study(const StudyConfig& config) {
  config.validate();
  ConvergenceReport report;
  report.config = config;

  double prev_err = 0.0;
  for (std::size_t level = 0; level < config.particle_counts.size(); ++level) {
    const int n_count = config.particle_counts[level];
    const int n_max =
        static_cast<int>(config.nmax_fraction * static_cast<double>(n_count));
    const LevelResult res = run_level(config, n_count, n_max);

    ConvergenceRow row;
    row.dx = config.domain_length / static_cast<double>(n_count);
    row.particle_count = n_count;
    row.err_max = res.err_max;
    row.err_l2 = res.err_l2;
    row.order = (level == 0) ? std::numeric_limits<double>::quiet_NaN()
                             : std::log2(prev_err / res.err_max);
    report.rows.push_back(row);
    if (level > 0 && res.err_max >= prev_err) report.monotone = false;
    prev_err = res.err_max;
  }

  if (!config.refinement_n_max.empty()) {
    const int n_count = config.refinement_particle_count > 0
                            ? config.refinement_particle_count
                            : config.particle_counts.back();
    for (int n_max : config.refinement_n_max) {
      if (n_max < 1 || n_max >= n_count / 2)
        throw validation_error("StudyConfig: refinement n_max must be in [1, N/2)");
      const LevelResult res = run_level(config, n_count, n_max);
      report.truncation_rows.push_back({n_max, res.err_max, res.err_l2});
    }
  }
  return report;
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw validation_error("fit_power_law: need matching sequences of length >= 3");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw validation_error("fit_power_law: data must be strictly positive");

  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw validation_error("fit_power_law: degenerate abscissae");
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = std::log(fit.prefactor) + fit.exponent * std::log(xs[i]);
    const double d = std::log(ys[i]) - pred;
    ss_res += d * d;
  }
  fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace fracelast
