#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmi {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct LabeledDim {
  std::string label;
  int dim = 0;
};

enum class StateKind { density, pure_vector };

/// Universal carrier for multipartite density operators and pure state
/// vectors. `matrix` is square for a density and a single column for a pure
/// vector; subsystem indices linearize row-major in the order of `dims`.
struct MultipartiteState {
  Mat matrix;
  std::vector<LabeledDim> dims;
  StateKind kind = StateKind::density;

  long total_dim() const;
  bool has_label(const std::string& label) const;
  int position(const std::string& label) const;  // throws on unknown label
  int dim_of(const std::string& label) const;
  std::vector<std::string> labels() const;
  long dim_product(const std::vector<std::string>& ls) const;
};

/// Rectangular matrix with V^+ V = identity on the input space.
struct Isometry {
  Mat matrix;  // rows = total out dim, cols = total in dim
  std::vector<LabeledDim> in_dims;
  std::vector<LabeledDim> out_dims;
};

// Validation throws std::invalid_argument naming the violated invariant.
void validate_state(const MultipartiteState& s);
void validate_isometry(const Isometry& v);

// Validating constructors for API boundaries.
MultipartiteState make_density(Mat m, std::vector<LabeledDim> dims);
MultipartiteState make_pure(Vec psi, std::vector<LabeledDim> dims);

// A label based on `base` that is not yet used by `s`.
std::string fresh_label(const MultipartiteState& s, const std::string& base);

long product_of_dims(const std::vector<LabeledDim>& dims);

}  // namespace qmi
