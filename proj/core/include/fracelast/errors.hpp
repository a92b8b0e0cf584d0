#pragma once

#include <stdexcept>
#include <string>

namespace fracelast {

// Invalid inputs / precondition violations.  CLI maps these to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Runtime numerical diagnostics (non-convergence, instability, singular
// systems).  CLI maps these to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// alpha at an even integer or A_m(alpha) = 0: the hyper-singular
// normalization d_n(m, alpha) is undefined; use the spectral path.
class degenerate_normalization : public validation_error {
 public:
  using validation_error::validation_error;
};

}  // namespace fracelast
