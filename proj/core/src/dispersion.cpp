#include "fracelast/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fracelast/errors.hpp"
#include "fracelast/quadrature.hpp"

namespace fracelast {

void DispersionLaw::validate() const {
  if (terms.empty()) throw validation_error("DispersionLaw: at least one term required");
  double prev = 0.0;
  for (const auto& t : terms) {
    if (!(t.alpha > 0.0)) throw validation_error("DispersionLaw: orders must be > 0");
    if (!(t.alpha > prev))
      throw validation_error("DispersionLaw: orders must be strictly increasing");
    if (t.a == 0.0) throw validation_error("DispersionLaw: coefficients must be nonzero");
    prev = t.alpha;
  }
}

void LatticeKernel::validate() const {
  if (coefficients.empty()) throw validation_error("LatticeKernel: empty coefficients");
  if (!(spacing > 0.0)) throw validation_error("LatticeKernel: spacing must be > 0");
}

void LatticeSpec::validate() const {
  kernel.validate();
  if (!(mass > 0.0)) throw validation_error("LatticeSpec: mass must be > 0");
  if (particle_count < 3) throw validation_error("LatticeSpec: particle_count must be >= 3");
}

double eval_lattice_dispersion(const LatticeKernel& kernel, double k) {
  kernel.validate();
  if (!std::isfinite(k)) throw validation_error("eval_lattice_dispersion: k not finite");
  const double theta = k * kernel.spacing;
  double sum = 0.0;
  for (std::size_t n = 0; n < kernel.coefficients.size(); ++n)
    sum += kernel.coefficients[n] * (1.0 - std::cos(static_cast<double>(n + 1) * theta));
  return 2.0 * sum;
}

double khat_zero(const LatticeKernel& kernel) {
  double sum = 0.0;
  for (double c : kernel.coefficients) sum += c;
  return 2.0 * sum;
}

double eval_target_dispersion(const DispersionLaw& law, double theta) {
  law.validate();
  const double t = std::abs(theta);
  double sum = 0.0;
  for (const auto& term : law.terms) sum += term.a * std::pow(t, term.alpha);
  return sum;
}

namespace {

// Identity below th0; slope tapers to zero at pi via the quintic smoothstep
// S5(t) = 6t^5 - 15t^4 + 10t^3 (integral t^6 - 3t^5 + 2.5t^4), so the
// even-periodic extension of the remapped target has no corner at the zone
// boundary and the synthesized tail is a clean power law.
double flatten_map(double theta, double th0) {
  if (theta <= th0) return theta;
  const double t = (theta - th0) / (M_PI - th0);
  const double integral = (M_PI - th0) * ((((t - 3.0) * t + 2.5) * t) * t * t * t);
  return theta - integral;
}

struct Mesh {
  std::vector<double> nodes;
  std::vector<double> coef;  // weight * phi(node) / pi
};

Mesh build_mesh(const DispersionLaw& law, const SynthesisOptions& options, int panels) {
  static const GaussLegendre rule(16);
  const double h = M_PI / static_cast<double>(panels);
  std::vector<double> edges;
  edges.push_back(0.0);
  for (int m = 50; m >= 1; --m) edges.push_back(h * std::ldexp(1.0, -m));
  for (int m = 1; m <= panels; ++m) edges.push_back(h * static_cast<double>(m));

  Mesh mesh;
  mesh.nodes.reserve((edges.size() - 1) * rule.nodes().size());
  mesh.coef.reserve(mesh.nodes.capacity());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    for (std::size_t q = 0; q < rule.nodes().size(); ++q) {
      const double theta = mid + half * rule.nodes()[q];
      const double arg =
          options.flatten ? flatten_map(theta, options.flatten_start) : theta;
      const double phi = eval_target_dispersion(law, arg);
      mesh.nodes.push_back(theta);
      mesh.coef.push_back(half * rule.weights()[q] * phi / M_PI);
    }
  }
  return mesh;
}

// All K(n) in one pass via the cosine three-term recurrence per node.
std::vector<double> transform_all(const Mesh& mesh, int n_max) {
  const std::size_t q = mesh.nodes.size();
  std::vector<double> c1(q), cur(q), prev(q, 1.0);
  for (std::size_t i = 0; i < q; ++i) {
    c1[i] = std::cos(mesh.nodes[i]);
    cur[i] = c1[i];
  }
  std::vector<double> coeffs(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      acc += mesh.coef[i] * cur[i];
      const double nxt = 2.0 * c1[i] * cur[i] - prev[i];
      prev[i] = cur[i];
      cur[i] = nxt;
    }
    coeffs[static_cast<std::size_t>(n - 1)] = acc;
  }
  return coeffs;
}

double transform_single(const Mesh& mesh, int n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    acc += mesh.coef[i] * std::cos(static_cast<double>(n) * mesh.nodes[i]);
  return acc;
}

}  // namespace

SynthesisResult synthesize_kernel(const DispersionLaw& law, double spacing, int n_max,
                                  const SynthesisOptions& options) {
  law.validate();
  if (n_max < 1) throw validation_error("synthesize_kernel: n_max must be >= 1");
  if (!(spacing > 0.0)) throw validation_error("synthesize_kernel: spacing must be > 0");

  int panels = std::max(64, static_cast<int>(static_cast<double>(n_max) * M_PI / 6.0));
  std::vector<double> coeffs;
  double quad_err = 0.0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Mesh mesh = build_mesh(law, options, panels);
    coeffs = transform_all(mesh, n_max);

    // Refinement check on a doubled mesh at a geometric subsample of n.
    const Mesh fine = build_mesh(law, options, 2 * panels);
    quad_err = 0.0;
    const int checks = std::max(2, options.check_points);
    int prev_n = 0;
    for (int i = 0; i < checks; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(checks - 1);
      int n = static_cast<int>(std::lround(std::pow(static_cast<double>(n_max), frac)));
      n = std::clamp(n, 1, n_max);
      if (n == prev_n) continue;
      prev_n = n;
      quad_err = std::max(
          quad_err,
          std::abs(coeffs[static_cast<std::size_t>(n - 1)] - transform_single(fine, n)));
    }
    if (quad_err <= options.abs_tol) break;
    panels *= 2;
  }

  SynthesisResult result;
  result.kernel.coefficients = std::move(coeffs);
  result.kernel.spacing = spacing;
  result.quadrature_error = quad_err;

  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const double theta = 0.01 + (0.5 - 0.01) * static_cast<double>(i) / 24.0;
    const double target = -eval_target_dispersion(law, theta);
    const double lat = eval_lattice_dispersion(result.kernel, theta / spacing);
    if (target != 0.0) worst = std::max(worst, std::abs(lat - target) / std::abs(target));
  }
  result.roundtrip_max_rel_error = worst;
  if (options.enforce_roundtrip && worst > 0.5)
    throw numerical_error(
        "synthesize_kernel: round-trip error exceeds 50%; n_max too small");
  return result;
}

double dispersion_relation(const LatticeSpec& spec, const DispersionLaw& law, double k) {
  spec.validate();
  law.validate();
  const double dx = spec.kernel.spacing;
  const double ak = std::abs(k);
  double omega2 = 0.0;
  for (const auto& term : law.terms)
    omega2 += spec.coupling * term.a * std::pow(dx, term.alpha) / spec.mass *
              std::pow(ak, term.alpha);
  if (omega2 < 0.0)
    throw numerical_error("dispersion_relation: negative omega^2 (instability)");
  return omega2;
}

StabilityReport check_stability(const LatticeSpec& spec, int samples) {
  spec.validate();
  if (samples < 2) throw validation_error("check_stability: samples must be >= 2");
  StabilityReport report;
  double scale = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double theta = M_PI * static_cast<double>(i) / static_cast<double>(samples);
    const double d = eval_lattice_dispersion(spec.kernel, theta / spec.kernel.spacing);
    const double omega2 = -spec.coupling * d / spec.mass;
    scale = std::max(scale, std::abs(omega2));
    if (omega2 < report.worst_value) {
      report.worst_value = omega2;
      report.worst_theta = theta;
    }
  }
  report.stable = report.worst_value >= -1e-12 * std::max(scale, 1.0);
  return report;
}

}  // namespace fracelast
