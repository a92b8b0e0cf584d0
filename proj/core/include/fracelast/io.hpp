#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracelast/dispersion.hpp"
#include "fracelast/fraclap.hpp"

namespace fracelast {

// Shortest representation that round-trips the 64-bit value exactly.
std::string format_double(double v);

// {"k_hat_zero": ..., "terms": [{"alpha": ..., "a": ...}, ...]}
std::string law_to_json(const DispersionLaw& law);
DispersionLaw law_from_json(const std::string& text);

// CSV `n,K`, n ascending from 1.  Lines starting with '#' are comments.
void write_kernel_csv(std::ostream& out, const LatticeKernel& kernel,
                      std::span<const std::string> comments = {});
LatticeKernel read_kernel_csv(std::istream& in, double spacing);

// CSV `x,value`
void write_grid_field_csv(std::ostream& out, const GridField& field,
                          std::span<const std::string> comments = {});

// Binary trajectory: magic "FLAT1", then frames of N little-endian doubles.
void write_trajectory_binary(std::ostream& out,
                             const std::vector<std::vector<double>>& frames);
std::vector<std::vector<double>> read_trajectory_binary(std::istream& in,
                                                        std::size_t frame_length);

std::uint64_t fnv1a_hash(std::string_view data);
std::string hash_hex(std::uint64_t h);

}  // namespace fracelast
