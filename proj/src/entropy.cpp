#include "qmi/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qmi/defaults.hpp"
#include "qmi/linalg.hpp"
#include "qmi/tensor.hpp"

namespace qmi {

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p must be in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double shannon_entropy_of(const Eigen::VectorXd& probs) {
  double h = 0.0;
  for (int i = 0; i < probs.size(); ++i)
    if (probs[i] > defaults::entropy_cutoff) h -= probs[i] * std::log2(probs[i]);
  return h;
}

double vn_entropy(const Mat& rho) { return shannon_entropy_of(herm_eig(rho).values); }

double vn_entropy(const MultipartiteState& s) {
  if (s.kind == StateKind::pure_vector) return 0.0;
  return vn_entropy(s.matrix);
}

double entropy_of(const MultipartiteState& s, const std::vector<std::string>& part) {
  if (part.empty()) return 0.0;
  return vn_entropy(partial_trace(s, part));
}

double relative_entropy(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  const HermEig er = herm_eig(rho);
  const HermEig es = herm_eig(sigma);
  // Support test: mass of rho outside supp(sigma).
  double outside = 0.0;
  for (int j = 0; j < es.values.size(); ++j) {
    if (es.values[j] > defaults::rank_cutoff) continue;
    const Vec w = es.vectors.col(j);
    outside += std::real((w.adjoint() * rho * w)(0, 0));
  }
  if (outside > defaults::rank_cutoff) return std::numeric_limits<double>::infinity();

  double tr_rho_log_rho = 0.0;
  for (int i = 0; i < er.values.size(); ++i)
    if (er.values[i] > defaults::entropy_cutoff)
      tr_rho_log_rho += er.values[i] * std::log2(er.values[i]);
  double tr_rho_log_sigma = 0.0;
  for (int j = 0; j < es.values.size(); ++j) {
    if (es.values[j] <= defaults::entropy_cutoff) continue;
    const Vec w = es.vectors.col(j);
    const double weight = std::real((w.adjoint() * rho * w)(0, 0));
    tr_rho_log_sigma += weight * std::log2(es.values[j]);
  }
  return tr_rho_log_rho - tr_rho_log_sigma;
}

namespace {
std::vector<std::string> join(const std::vector<std::vector<std::string>>& parts) {
  std::vector<std::string> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}
}  // namespace

double mutual_info(const MultipartiteState& s, const std::vector<std::string>& part_a,
                   const std::vector<std::string>& part_b) {
  return multi_info(s, {part_a, part_b});
}

double multi_info(const MultipartiteState& s,
                  const std::vector<std::vector<std::string>>& parts) {
  double sum = 0.0;
  for (const auto& p : parts) sum += entropy_of(s, p);
  return sum - entropy_of(s, join(parts));
}

double cond_mutual_info(const MultipartiteState& s, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& e) {
  if (e.empty()) return mutual_info(s, a, b);
  std::vector<std::string> ae = a, be = b, abe = a;
  ae.insert(ae.end(), e.begin(), e.end());
  be.insert(be.end(), e.begin(), e.end());
  abe.insert(abe.end(), b.begin(), b.end());
  abe.insert(abe.end(), e.begin(), e.end());
  return entropy_of(s, ae) + entropy_of(s, be) - entropy_of(s, abe) - entropy_of(s, e);
}

double coherent_info(const MultipartiteState& s, const std::vector<std::string>& a,
                     const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy_of(s, b) - entropy_of(s, ab);
}

double j_quantity(const MultipartiteState& s,
                  const std::vector<std::vector<std::string>>& parts) {
  double sum = 0.0;
  for (const auto& p : parts) sum += entropy_of(s, p);
  return sum + entropy_of(s, join(parts));
}

double af_bound(double epsilon, int dim_a) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("af_bound: epsilon must be in [0,1]");
  if (dim_a < 1) throw std::invalid_argument("af_bound: dim must be >= 1");
  if (epsilon == 0.0) return 0.0;
  return 2.0 * epsilon * std::log2(static_cast<double>(dim_a)) +
         (1.0 + epsilon) * binary_entropy(epsilon / (1.0 + epsilon));
}

EntropicReport standard_report(const MultipartiteState& s) {
  EntropicReport rep;
  std::vector<std::vector<std::string>> singles;
  for (const auto& d : s.dims) {
    singles.push_back({d.label});
    rep.emplace_back("S(" + d.label + ")", entropy_of(s, {d.label}));
  }
  rep.emplace_back("S(total)", entropy_of(s, s.labels()));
  if (s.dims.size() >= 2) {
    rep.emplace_back("multi_info", multi_info(s, singles));
    rep.emplace_back("J", j_quantity(s, singles));
  }
  if (s.dims.size() == 2) {
    const std::string a = s.dims[0].label, b = s.dims[1].label;
    rep.emplace_back("I(" + a + ":" + b + ")", mutual_info(s, {a}, {b}));
    rep.emplace_back("I(" + a + ">" + b + ")", coherent_info(s, {a}, {b}));
    rep.emplace_back("I(" + b + ">" + a + ")", coherent_info(s, {b}, {a}));
  }
  return rep;
}

}  // namespace qmi
