#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracelast {

// Gauss-Legendre rule; nodes/weights for [-1,1] computed once via Newton
// iteration on the Legendre recurrence.
class GaussLegendre {
 public:
  explicit GaussLegendre(int points);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  double integrate(const std::function<double(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct AcceleratedSum {
  double value = 0.0;
  double remainder = 0.0;  // magnitude of the last averaging correction
};

// Iterated pairwise averaging (Euler-transform style) applied to the partial
// sums of an alternating series.  The limit of an alternating series with
// monotone terms is bracketed by consecutive partial sums, and repeated
// averaging contracts that bracket geometrically.
AcceleratedSum accelerate_alternating(std::span<const double> partial_sums);

}  // namespace fracelast
