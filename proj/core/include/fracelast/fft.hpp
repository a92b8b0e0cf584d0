#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracelast {

// In-place complex DFT.  Iterative radix-2 when the length is a power of two;
// O(P^2) direct evaluation otherwise.  The inverse transform divides by P.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

std::vector<std::complex<double>> fft_real(std::span<const double> x);

// Real part of the inverse transform of a full-length spectrum.
std::vector<double> ifft_to_real(std::vector<std::complex<double>> spectrum);

bool is_power_of_two(std::size_t n);

}  // namespace fracelast
