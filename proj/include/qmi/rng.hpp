#pragma once

#include <cstdint>
#include <random>

#include "qmi/types.hpp"

namespace qmi {

/// Stream splitting rule: stream k of master seed s is
/// splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15). Workers and trials derive
/// their seeds with this, so results are independent of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic Gaussian source: Box-Muller on 53-bit uniforms drawn from
/// mt19937_64, avoiding the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  cxd complex_gaussian();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Mat ginibre(int rows, int cols, std::uint64_t seed);

/// Haar unitary: QR of a complex Ginibre matrix, with the phase convention
/// that R's diagonal is made positive.
Mat haar_unitary(int dim, std::uint64_t seed);

/// Haar isometry C^din -> C^dout (dout >= din), same construction on a thin
/// Ginibre matrix. Labels of in/out dims are left for the caller to fill.
Mat haar_isometry_matrix(int din, int dout, std::uint64_t seed);
Isometry haar_isometry(const std::vector<LabeledDim>& in_dims,
                       const std::vector<LabeledDim>& out_dims, std::uint64_t seed);

/// Partial trace of a Haar-random pure state on dim x rank.
MultipartiteState random_density(int dim, int rank, std::uint64_t seed,
                                 const std::string& label = "A");
MultipartiteState random_density(std::vector<LabeledDim> dims, int rank, std::uint64_t seed);

}  // namespace qmi
