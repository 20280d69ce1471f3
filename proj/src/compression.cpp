#include "qmi/compression.hpp"

#include <cmath>
#include <stdexcept>

#include "qmi/defaults.hpp"
#include "qmi/entropy.hpp"
#include "qmi/linalg.hpp"
#include "qmi/mindep.hpp"
#include "qmi/tensor.hpp"

namespace qmi {

double rate_sum_theorem(const MultipartiteState& rho_ab, double iind_value) {
  if (rho_ab.dims.size() != 2)
    throw std::invalid_argument("rate_sum_theorem: need a bipartite state");
  const std::string la = rho_ab.dims[0].label, lb = rho_ab.dims[1].label;
  const double half_mi = 0.5 * mutual_info(rho_ab, {la}, {lb});
  if (iind_value < -1e-9 || iind_value > half_mi + 1e-9)
    throw std::invalid_argument(
        "rate_sum_theorem: independence value must lie in [0, I(A:B)/2]");
  return 0.5 * j_quantity(rho_ab, {{la}, {lb}}) - iind_value;
}

RatePoint rate_pair_exact(const MultipartiteState& split_state, const SplitLabels& labels,
                          bool send_a_first) {
  const ExactMiReport pre = check_exact_mi(split_state, {labels.alpha, labels.beta});
  if (pre.residual > defaults::exact_mi_residual_tol)
    throw std::invalid_argument(
        "rate_pair_exact: (alpha, beta) is not product with the reference (residual = " +
        std::to_string(pre.residual) + ")");

  const MultipartiteState rho = densify(split_state);
  const std::string lr = fresh_label(rho, "R");
  const MultipartiteState psi = purify(rho, lr);
  const auto S = [&](const std::vector<std::string>& part) { return entropy_of(psi, part); };

  const std::string a = labels.a, al = labels.alpha, b = labels.b, be = labels.beta;
  RatePoint pt;
  if (send_a_first) {
    pt.r_a = 0.5 * (S({a}) + S({a, al}) - S({al}));
    pt.r_b = 0.5 * (S({a, b}) + S({a, al, lr}) - S({be}) - S({a}));
    pt.formula = "R_A = I(a:R b beta)/2, R_B = I(b:R alpha | a)/2";
    pt.assumptions = "sends a first; exact mutual independence in (alpha, beta)";
  } else {
    pt.r_b = 0.5 * (S({b}) + S({b, be}) - S({be}));
    pt.r_a = 0.5 * (S({a, b}) + S({b, be, lr}) - S({al}) - S({b}));
    pt.formula = "R_B = I(b:R a alpha)/2, R_A = I(a:R beta | b)/2";
    pt.assumptions = "sends b first; exact mutual independence in (alpha, beta)";
  }
  return pt;
}

RateSumIdentity rate_sum_identity_check(const MultipartiteState& split_state,
                                        const SplitLabels& labels) {
  const RatePoint pt = rate_pair_exact(split_state, labels);
  const MultipartiteState rho = densify(split_state);
  const std::vector<std::string> full_a = {labels.a, labels.alpha};
  const std::vector<std::string> full_b = {labels.b, labels.beta};
  RateSumIdentity out;
  out.lhs = pt.r_a + pt.r_b;
  out.rhs = 0.5 * j_quantity(rho, {full_a, full_b}) -
            0.5 * mutual_info(rho, {labels.alpha}, {labels.beta});
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

std::vector<RatePoint> corner_points(const MultipartiteState& rho_ab) {
  if (rho_ab.dims.size() != 2)
    throw std::invalid_argument("corner_points: need a bipartite state");
  const MultipartiteState rho = densify(rho_ab);
  const std::string la = rho.dims[0].label, lb = rho.dims[1].label;
  const std::string lr = fresh_label(rho, "R");
  const MultipartiteState psi = purify(rho, lr);

  std::vector<RatePoint> pts;
  pts.push_back({0.5 * mutual_info(psi, {la}, {lr}), entropy_of(psi, {lb}),
                 "R_A = I(A:R)/2, R_B = S(B)",
                 "achievable with entanglement-assisted merging"});
  pts.push_back({entropy_of(psi, {la}), 0.5 * mutual_info(psi, {lb}, {lr}),
                 "R_A = S(A), R_B = I(B:R)/2",
                 "achievable with entanglement-assisted merging"});
  return pts;
}

std::vector<RatePoint> conjectural_corner_points(const MultipartiteState& rho_ab,
                                                 double iind_value) {
  std::vector<RatePoint> pts = corner_points(rho_ab);
  pts[0].r_b -= iind_value;
  pts[0].formula = "R_A = I(A:R)/2, R_B = S(B) - I_ind";
  pts[0].assumptions = "achievability open; do not assume";
  pts[1].r_a -= iind_value;
  pts[1].formula = "R_A = S(A) - I_ind, R_B = I(B:R)/2";
  pts[1].assumptions = "achievability open; do not assume";
  return pts;
}

ConverseBounds converse_bounds(const MultipartiteState& rho_ab, double esq_value) {
  if (rho_ab.dims.size() != 2)
    throw std::invalid_argument("converse_bounds: need a bipartite state");
  const MultipartiteState rho = densify(rho_ab);
  const std::string la = rho.dims[0].label, lb = rho.dims[1].label;
  const std::string lr = fresh_label(rho, "R");
  const MultipartiteState psi = purify(rho, lr);
  ConverseBounds out;
  out.r_a_min = 0.5 * mutual_info(psi, {la}, {lr});
  out.r_b_min = 0.5 * mutual_info(psi, {lb}, {lr});
  out.sum_min = 0.5 * j_quantity(rho, {{la}, {lb}}) - esq_value;
  return out;
}

double multipartite_rate_sum(const MultipartiteState& s,
                             const std::vector<std::vector<std::string>>& parts,
                             double iind_value) {
  return 0.5 * j_quantity(s, parts) - iind_value;
}

MultipartiteDecomposition multipartite_decomposed(
    const MultipartiteState& s, const std::vector<std::vector<std::string>>& parts,
    const std::vector<std::vector<std::string>>& alphas) {
  if (parts.size() != alphas.size())
    throw std::invalid_argument("multipartite_decomposed: one alpha set per part");
  const MultipartiteState rho = densify(s);

  std::vector<std::string> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::vector<std::string> alpha_join;
  for (const auto& a : alphas) alpha_join.insert(alpha_join.end(), a.begin(), a.end());

  MultipartiteDecomposition out;
  out.s_total = entropy_of(rho, all);
  out.quantum_correction = 0.5 * (multi_info(rho, parts) - multi_info(rho, alphas));
  out.rate_sum = out.s_total + out.quantum_correction;
  out.direct_form = 0.5 * j_quantity(rho, parts) - 0.5 * multi_info(rho, alphas);

  // Residual of the exactness assumption: alphas jointly product with R.
  const std::string lr = fresh_label(rho, "R");
  const MultipartiteState psi = purify(rho, lr);
  std::vector<std::string> keep = alpha_join;
  keep.push_back(lr);
  const MultipartiteState joint = partial_trace(psi, keep);
  const MultipartiteState ra = partial_trace(rho, alpha_join);
  const MultipartiteState rr = partial_trace(psi, {lr});
  out.exact_mi_residual = trace_norm(joint.matrix - tensor_product(ra, rr).matrix);
  return out;
}

}  // namespace qmi
