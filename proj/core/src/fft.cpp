#include "fracelast/fft.hpp"

#include <cmath>

#include "fracelast/errors.hpp"

namespace fracelast {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

void dft_naive(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  const double sgn = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sgn * 2.0 * M_PI * static_cast<double>(k) *
                         static_cast<double>(j) / static_cast<double>(n);
      acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  if (a.empty()) throw validation_error("fft: empty input");
  if (is_power_of_two(a.size()))
    fft_radix2(a, inverse);
  else
    dft_naive(a, inverse);
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= inv;
  }
}

std::vector<std::complex<double>> fft_real(std::span<const double> x) {
  std::vector<std::complex<double>> a(x.begin(), x.end());
  fft_inplace(a, false);
  return a;
}

std::vector<double> ifft_to_real(std::vector<std::complex<double>> spectrum) {
  fft_inplace(spectrum, true);
  std::vector<double> out(spectrum.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i].real();
  return out;
}

}  // namespace fracelast
