#include "qmi/linalg.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qmi/defaults.hpp"

namespace qmi {

Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

HermEig herm_eig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian_part(m));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

void fix_phase(Eigen::Ref<Vec> v) {
  int imax = 0;
  double best = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (best < 1e-300) return;
  v *= std::conj(v[imax]) / best;
}

// Lexicographic order on (re, im) entry pairs.
bool vec_lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace

HermEig herm_eig_sorted(const Mat& m) {
  HermEig e = herm_eig(m);
  const int n = static_cast<int>(e.values.size());
  Mat vecs = e.vectors;
  for (int i = 0; i < n; ++i) fix_phase(vecs.col(i));
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (std::abs(e.values[a] - e.values[b]) > defaults::rank_cutoff)
      return e.values[a] > e.values[b];
    return vec_lex_less(Vec(vecs.col(a)), Vec(vecs.col(b)));
  });
  HermEig out;
  out.values.resize(n);
  out.vectors.resize(vecs.rows(), n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = e.values[idx[i]];
    out.vectors.col(i) = vecs.col(idx[i]);
  }
  return out;
}

double trace_norm(const Mat& m) {
  if (m.rows() == m.cols()) {
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (asym <= 1e-12 * scale) {
      // Hermitian: sum of |eigenvalues|.
      return herm_eig(m).values.cwiseAbs().sum();
    }
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const Mat& a, const Mat& b) { return 0.5 * trace_norm(a - b); }

int numerical_rank(const Eigen::VectorXd& eigenvalues, double cutoff) {
  int r = 0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] > cutoff) ++r;
  return r;
}

Mat support_projector(const Mat& rho, double cutoff) {
  const HermEig e = herm_eig(rho);
  Mat p = Mat::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values[i] > cutoff) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
  return p;
}

double identity_distance(const Mat& m) {
  const long d = m.rows();
  const cxd mean = m.trace() / static_cast<double>(d);
  return (m - mean * Mat::Identity(d, d)).norm();
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / (i + 1);
    if (u[i] - t > 0) {
      k = i + 1;
      theta = t;
    }
  }
  (void)k;
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(0.0, v[i] - theta);
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat unitary_from_params(const double* p, int d) {
  Mat u = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) u(i, i) = std::exp(cxd(0.0, p[i]));
  int k = d;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double th = p[k++];
      const double ph = p[k++];
      Mat g = Mat::Identity(d, d);
      const double c = std::cos(th), sn = std::sin(th);
      g(i, i) = c;
      g(j, j) = c;
      g(i, j) = -std::exp(cxd(0.0, ph)) * sn;
      g(j, i) = std::exp(cxd(0.0, -ph)) * sn;
      u = u * g;
    }
  return u;
}

std::vector<Mat> hermitian_traceless_basis(int d) {
  std::vector<Mat> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat sym = Mat::Zero(d, d);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(sym);
      Mat asym = Mat::Zero(d, d);
      asym(i, j) = cxd(0.0, -inv_sqrt2);
      asym(j, i) = cxd(0.0, inv_sqrt2);
      basis.push_back(asym);
    }
  for (int k = 1; k < d; ++k) {
    Mat diag = Mat::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) diag(i, i) = norm;
    diag(k, k) = -static_cast<double>(k) * norm;
    basis.push_back(diag);
  }
  return basis;
}

}  // namespace qmi
