#pragma once

#include <cstdint>
#include <random>

#include "sclrom/types.hpp"

namespace sclrom {

/// Seeded source of reproducible Gaussian samples.
///
/// std::normal_distribution is implementation-defined, so histories would
/// differ between standard libraries. This draws 53-bit uniforms straight
/// from mt19937_64 and applies Box-Muller, which pins the sequence for a
/// given seed.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // (0, 1)
  double normal();
  Complex complex_normal();  // E|z|^2 = 1

  Matrix complex_matrix(Index rows, Index cols);
  Vector complex_vector(Index size);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Orthonormal columns from modified Gram-Schmidt (applied twice) over a
/// seeded complex Gaussian matrix, with the largest-magnitude entry of each
/// column rotated to be real and positive.
Matrix random_orthonormal_frame(Index n, Index k, std::uint64_t seed);

/// Rotates each column so its first largest-magnitude entry is real and
/// positive. Returns the applied unit phases (column j was multiplied by
/// phases[j]).
Vector normalize_column_phases(Matrix& columns);

}  // namespace sclrom
