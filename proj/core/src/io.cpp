#include "fracelast/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "fracelast/errors.hpp"
#include "json.hpp"

namespace fracelast {

std::string format_double(double v) {
  char buf[64];
  // std::to_chars general format emits the shortest round-trip representation
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string law_to_json(const DispersionLaw& law) {
  law.validate();
  nlohmann::ordered_json j;
  j["k_hat_zero"] = law.k_hat_zero;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : law.terms) j["terms"].push_back({{"alpha", t.alpha}, {"a", t.a}});
  return j.dump();
}

DispersionLaw law_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("law_from_json: parse error: ") + e.what());
  }
  DispersionLaw law;
  try {
    law.k_hat_zero = j.value("k_hat_zero", 0.0);
    for (const auto& t : j.at("terms"))
      law.terms.push_back({t.at("alpha").get<double>(), t.at("a").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("law_from_json: ") + e.what());
  }
  law.validate();
  return law;
}

void write_kernel_csv(std::ostream& out, const LatticeKernel& kernel,
                      std::span<const std::string> comments) {
  kernel.validate();
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "n,K\n";
  for (std::size_t i = 0; i < kernel.coefficients.size(); ++i)
    out << (i + 1) << "," << format_double(kernel.coefficients[i]) << "\n";
}

LatticeKernel read_kernel_csv(std::istream& in, double spacing) {
  LatticeKernel kernel;
  kernel.spacing = spacing;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "n,K") throw validation_error("read_kernel_csv: expected header n,K");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw validation_error("read_kernel_csv: malformed row");
    const long n = std::strtol(line.c_str(), nullptr, 10);
    if (n != static_cast<long>(kernel.coefficients.size()) + 1)
      throw validation_error("read_kernel_csv: n must ascend from 1");
    kernel.coefficients.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  kernel.validate();
  return kernel;
}

void write_grid_field_csv(std::ostream& out, const GridField& field,
                          std::span<const std::string> comments) {
  field.validate();
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "x,value\n";
  for (std::size_t i = 0; i < field.size(); ++i)
    out << format_double(field.x(i)) << "," << format_double(field.samples[i]) << "\n";
}

void write_trajectory_binary(std::ostream& out,
                             const std::vector<std::vector<double>>& frames) {
  out.write("FLAT1", 5);
  for (const auto& frame : frames)
    for (double v : frame) {
      // doubles are stored little-endian; all supported targets are LE
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

std::vector<std::vector<double>> read_trajectory_binary(std::istream& in,
                                                        std::size_t frame_length) {
  if (frame_length == 0)
    throw validation_error("read_trajectory_binary: frame_length must be > 0");
  char magic[5];
  in.read(magic, 5);
  if (in.gcount() != 5 || std::memcmp(magic, "FLAT1", 5) != 0)
    throw validation_error("read_trajectory_binary: bad magic");
  std::vector<std::vector<double>> frames;
  while (true) {
    std::vector<double> frame(frame_length);
    in.read(reinterpret_cast<char*>(frame.data()),
            static_cast<std::streamsize>(frame_length * sizeof(double)));
    if (in.gcount() == 0) break;
    if (in.gcount() != static_cast<std::streamsize>(frame_length * sizeof(double)))
      throw validation_error("read_trajectory_binary: truncated frame");
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::uint64_t fnv1a_hash(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace fracelast
