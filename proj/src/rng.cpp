#include "qmi/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace qmi {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + (index + 1) * kGolden);
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

cxd Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return cxd(re, im) / std::sqrt(2.0);
}

Mat ginibre(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  return g;
}

namespace {
Mat qr_with_positive_diag(const Mat& g) {
  const int rows = static_cast<int>(g.rows());
  const int cols = static_cast<int>(g.cols());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(rows, cols);
  const Mat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    const cxd d = r(j, j);
    const double a = std::abs(d);
    if (a > 1e-300) q.col(j) *= d / a;
  }
  return q;
}
}  // namespace

Mat haar_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  return qr_with_positive_diag(ginibre(dim, dim, seed));
}

Mat haar_isometry_matrix(int din, int dout, std::uint64_t seed) {
  if (din < 1 || dout < din)
    throw std::invalid_argument("haar_isometry: need 1 <= din <= dout");
  return qr_with_positive_diag(ginibre(dout, din, seed));
}

Isometry haar_isometry(const std::vector<LabeledDim>& in_dims,
                       const std::vector<LabeledDim>& out_dims, std::uint64_t seed) {
  const long din = product_of_dims(in_dims);
  const long dout = product_of_dims(out_dims);
  Isometry v{haar_isometry_matrix(static_cast<int>(din), static_cast<int>(dout), seed),
             in_dims, out_dims};
  return v;
}

MultipartiteState random_density(std::vector<LabeledDim> dims, int rank, std::uint64_t seed) {
  const long dim = product_of_dims(dims);
  if (rank < 1 || rank > dim)
    throw std::invalid_argument("random_density: need 1 <= rank <= dim");
  Rng rng(seed);
  Mat m(dim, rank);  // columns index the traced-out purifier
  for (long i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) m(i, j) = rng.complex_gaussian();
  m /= m.norm();
  MultipartiteState s;
  s.matrix = m * m.adjoint();
  s.dims = std::move(dims);
  s.kind = StateKind::density;
  return s;
}

MultipartiteState random_density(int dim, int rank, std::uint64_t seed,
                                 const std::string& label) {
  return random_density(std::vector<LabeledDim>{{label, dim}}, rank, seed);
}

}  // namespace qmi
