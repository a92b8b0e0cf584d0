#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "fracelast/errors.hpp"
#include "fracelast/io.hpp"

using namespace fracelast;

TEST_CASE("shortest round-trip float formatting") {
  const double samples[] = {0.0,      -0.0,   0.1,    1.0 / 3.0, 1e300,
                            -2.5e-17, 1.0,    123456, 0.30000000000000004};
  for (double v : samples) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("law json round trip") {
  DispersionLaw law;
  law.terms = {{1.5, -0.5}, {2.0, -1.0}};
  law.k_hat_zero = 0.25;
  const std::string text = law_to_json(law);
  const DispersionLaw back = law_from_json(text);
  REQUIRE(back.terms.size() == 2);
  CHECK(back.terms[0].alpha == 1.5);
  CHECK(back.terms[0].a == -0.5);
  CHECK(back.terms[1].alpha == 2.0);
  CHECK(back.terms[1].a == -1.0);
  CHECK(back.k_hat_zero == 0.25);

  CHECK_THROWS_AS(law_from_json("{\"terms\": []}"), validation_error);
  CHECK_THROWS_AS(law_from_json("not json"), validation_error);
}

TEST_CASE("kernel csv round trip") {
  LatticeKernel k;
  k.coefficients = {2.0, -0.5, 2.0 / 9.0, -1e-12};
  k.spacing = 0.5;
  std::stringstream ss;
  const std::vector<std::string> comments = {"tool test"};
  write_kernel_csv(ss, k, comments);
  const std::string text = ss.str();
  CHECK(text.find("# tool test") != std::string::npos);
  CHECK(text.find("n,K") != std::string::npos);
  std::stringstream in(text);
  const LatticeKernel back = read_kernel_csv(in, 0.5);
  REQUIRE(back.coefficients.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(back.coefficients[i] == k.coefficients[i]);
}

TEST_CASE("trajectory binary round trip") {
  std::vector<std::vector<double>> frames = {
      {0.0, 1.0, -2.5}, {0.1, 0.9, -2.4}, {0.2, 0.8, -2.3}};
  std::stringstream ss;
  write_trajectory_binary(ss, frames);
  const auto back = read_trajectory_binary(ss, 3);
  REQUIRE(back.size() == 3);
  for (std::size_t f = 0; f < 3; ++f)
    for (std::size_t i = 0; i < 3; ++i) CHECK(back[f][i] == frames[f][i]);

  std::stringstream bad("XXXX1junk");
  CHECK_THROWS_AS(read_trajectory_binary(bad, 3), validation_error);
}

TEST_CASE("config hashing is stable") {
  CHECK(fnv1a_hash("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a_hash("a") != fnv1a_hash("b"));
  CHECK(hash_hex(0xcbf29ce484222325ull).size() == 16);
}
