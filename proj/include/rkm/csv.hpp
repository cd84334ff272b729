#pragma once

#include <charconv>
#include <cstdint>
#include <string>

#include "rkm/matrix.hpp"
#include "rkm/sampling.hpp"

namespace rkm {

// Shortest round-trip decimal form; stable across runs, so CSV output is
// byte-reproducible for a fixed seed.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

// One row per vector; optional "x0,x1,..." header.
inline std::string samples_to_csv(const SampleSet& samples, bool header = false) {
  std::string out;
  if (header) {
    for (std::size_t j = 0; j < samples.dim(); ++j) {
      if (j) out += ',';
      out += "x" + std::to_string(j);
    }
    out += '\n';
  }
  out += matrix_to_csv(samples.data);
  return out;
}

}  // namespace rkm
