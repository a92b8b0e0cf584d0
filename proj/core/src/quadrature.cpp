#include "fracelast/quadrature.hpp"

#include <cmath>
#include <cstddef>

#include "fracelast/errors.hpp"

namespace fracelast {

GaussLegendre::GaussLegendre(int points) {
  if (points < 1) throw validation_error("GaussLegendre: points must be >= 1");
  const std::size_t n = static_cast<std::size_t>(points);
  nodes_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double jj = static_cast<double>(j);
        const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes_[i] = x;
    weights_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a,
                                double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    sum += weights_[i] * f(mid + half * nodes_[i]);
  return half * sum;
}

AcceleratedSum accelerate_alternating(std::span<const double> partial_sums) {
  if (partial_sums.size() < 2)
    throw validation_error("accelerate_alternating: need >= 2 partial sums");
  std::vector<double> s(partial_sums.begin(), partial_sums.end());
  double last_correction = 0.0;
  while (s.size() > 1) {
    last_correction = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double avg = 0.5 * (s[i] + s[i + 1]);
      last_correction = std::max(last_correction, std::abs(avg - s[i + 1]));
      s[i] = avg;
    }
    s.pop_back();
  }
  return {s[0], last_correction};
}

}  // namespace fracelast
