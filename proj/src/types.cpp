#include "qmi/types.hpp"

#include <set>
#include <stdexcept>

#include "qmi/defaults.hpp"
#include "qmi/linalg.hpp"

namespace qmi {

long product_of_dims(const std::vector<LabeledDim>& dims) {
  long p = 1;
  for (const auto& d : dims) p *= d.dim;
  return p;
}

long MultipartiteState::total_dim() const { return product_of_dims(dims); }

bool MultipartiteState::has_label(const std::string& label) const {
  for (const auto& d : dims)
    if (d.label == label) return true;
  return false;
}

int MultipartiteState::position(const std::string& label) const {
  for (size_t i = 0; i < dims.size(); ++i)
    if (dims[i].label == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown label: " + label);
}

int MultipartiteState::dim_of(const std::string& label) const {
  return dims[position(label)].dim;
}

std::vector<std::string> MultipartiteState::labels() const {
  std::vector<std::string> out;
  out.reserve(dims.size());
  for (const auto& d : dims) out.push_back(d.label);
  return out;
}

long MultipartiteState::dim_product(const std::vector<std::string>& ls) const {
  long p = 1;
  for (const auto& l : ls) p *= dim_of(l);
  return p;
}

void validate_state(const MultipartiteState& s) {
  std::set<std::string> seen;
  for (const auto& d : s.dims) {
    if (d.dim < 1) throw std::invalid_argument("state invariant violated: positive-dims (dim of '" + d.label + "' is " + std::to_string(d.dim) + ")");
    if (!seen.insert(d.label).second)
      throw std::invalid_argument("state invariant violated: label-uniqueness (duplicate '" + d.label + "')");
  }
  const long n = s.total_dim();
  if (s.kind == StateKind::pure_vector) {
    if (s.matrix.cols() != 1 || s.matrix.rows() != n)
      throw std::invalid_argument("state invariant violated: dims-product (vector length " + std::to_string(s.matrix.rows()) + " vs dims product " + std::to_string(n) + ")");
    const double norm_err = std::abs(s.matrix.squaredNorm() - 1.0);
    if (norm_err > defaults::trace_tol)
      throw std::invalid_argument("state invariant violated: unit-norm (| <psi|psi> - 1 | = " + std::to_string(norm_err) + ")");
    return;
  }
  if (s.matrix.rows() != n || s.matrix.cols() != n)
    throw std::invalid_argument("state invariant violated: dims-product (matrix is " + std::to_string(s.matrix.rows()) + "x" + std::to_string(s.matrix.cols()) + " vs dims product " + std::to_string(n) + ")");
  const double herm = (s.matrix - s.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > defaults::herm_tol)
    throw std::invalid_argument("state invariant violated: hermiticity (max |M - M^+| = " + std::to_string(herm) + ")");
  const double tr_err = std::abs(s.matrix.trace() - cxd(1.0, 0.0));
  if (tr_err > defaults::trace_tol)
    throw std::invalid_argument("state invariant violated: unit-trace (|Tr - 1| = " + std::to_string(tr_err) + ")");
  const auto eig = herm_eig(s.matrix);
  if (eig.values.minCoeff() < -defaults::psd_tol)
    throw std::invalid_argument("state invariant violated: positivity (min eigenvalue = " + std::to_string(eig.values.minCoeff()) + ")");
}

void validate_isometry(const Isometry& v) {
  const long din = product_of_dims(v.in_dims);
  const long dout = product_of_dims(v.out_dims);
  if (v.matrix.cols() != din || v.matrix.rows() != dout)
    throw std::invalid_argument("isometry invariant violated: dims-product (matrix is " + std::to_string(v.matrix.rows()) + "x" + std::to_string(v.matrix.cols()) + ")");
  if (dout < din)
    throw std::invalid_argument("isometry invariant violated: output-dim (out " + std::to_string(dout) + " < in " + std::to_string(din) + ")");
  const Mat gram = v.matrix.adjoint() * v.matrix;
  const double err = (gram - Mat::Identity(din, din)).cwiseAbs().maxCoeff();
  if (err > defaults::isometry_tol)
    throw std::invalid_argument("isometry invariant violated: V^+V-identity (max error = " + std::to_string(err) + ")");
}

MultipartiteState make_density(Mat m, std::vector<LabeledDim> dims) {
  MultipartiteState s{std::move(m), std::move(dims), StateKind::density};
  validate_state(s);
  return s;
}

MultipartiteState make_pure(Vec psi, std::vector<LabeledDim> dims) {
  MultipartiteState s{std::move(psi), std::move(dims), StateKind::pure_vector};
  validate_state(s);
  return s;
}

std::string fresh_label(const MultipartiteState& s, const std::string& base) {
  if (!s.has_label(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (!s.has_label(cand)) return cand;
  }
}

}  // namespace qmi
