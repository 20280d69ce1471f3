#pragma once

#include "qmi/types.hpp"

namespace qmi {

Mat hermitian_part(const Mat& m);

/// Eigendecomposition of the hermitian part, eigenvalues ascending
/// (Eigen's native order).
struct HermEig {
  Eigen::VectorXd values;
  Mat vectors;  // columns
};
HermEig herm_eig(const Mat& m);

/// Eigenvalues descending with a fixed eigenvector phase convention
/// (largest-magnitude entry made real positive) and deterministic
/// lexicographic tie-breaking among degenerate eigenvalues.
HermEig herm_eig_sorted(const Mat& m);

double trace_norm(const Mat& m);
double trace_distance(const Mat& a, const Mat& b);

int numerical_rank(const Eigen::VectorXd& eigenvalues, double cutoff);

/// Projector onto the eigenspaces of rho with eigenvalue > cutoff.
Mat support_projector(const Mat& rho, double cutoff);

/// Frobenius distance of m from span{identity}.
double identity_distance(const Mat& m);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

Mat kron(const Mat& a, const Mat& b);

/// d x d unitary from d*d real parameters: d phases, then one (theta, phase)
/// pair per index pair (i < j) in lexicographic order; zero parameters give
/// the identity.
Mat unitary_from_params(const double* p, int d);
inline int unitary_param_count(int d) { return d * d; }

/// Orthonormal basis of Hermitian traceless d x d matrices, unit Frobenius
/// norm (generalized Gell-Mann matrices).
std::vector<Mat> hermitian_traceless_basis(int d);

}  // namespace qmi
