#pragma once

#include <string>
#include <vector>

#include "qmi/types.hpp"

namespace qmi {

struct RatePoint {
  double r_a = 0.0;  // qubits per copy
  double r_b = 0.0;
  std::string formula;
  std::string assumptions;
};

/// Names the four parts of a split state rho_{a alpha b beta}: `a`,`b` are
/// sent, `alpha`,`beta` are retained and product with the reference.
struct SplitLabels {
  std::string a = "a", alpha = "alpha", b = "b", beta = "beta";
};

/// (1/2) J(A:B) - iind for a caller-supplied certified independence value.
double rate_sum_theorem(const MultipartiteState& rho_ab, double iind_value);

/// State-redistribution rate pair for a split with exact mutual independence
/// in (alpha, beta): R_A = (S(a)+S(A)-S(alpha))/2,
/// R_B = (S(ab)+S(A R)-S(beta)-S(a))/2, sending a first.
RatePoint rate_pair_exact(const MultipartiteState& split_state,
                          const SplitLabels& labels = {}, bool send_a_first = true);

struct RateSumIdentity {
  double lhs = 0.0;  // R_A + R_B from the redistribution pair
  double rhs = 0.0;  // (1/2) J(A:B) - (1/2) I(alpha:beta)
  double gap = 0.0;
};
RateSumIdentity rate_sum_identity_check(const MultipartiteState& split_state,
                                        const SplitLabels& labels = {});

/// The two entanglement-assisted corner points (no independence subtracted).
std::vector<RatePoint> corner_points(const MultipartiteState& rho_ab);

/// Corner points with a certified independence value subtracted; flagged as
/// achievability-open.
std::vector<RatePoint> conjectural_corner_points(const MultipartiteState& rho_ab,
                                                 double iind_value);

struct ConverseBounds {
  double r_a_min = 0.0;
  double r_b_min = 0.0;
  double sum_min = 0.0;  // (1/2) J - E_sq
};
ConverseBounds converse_bounds(const MultipartiteState& rho_ab, double esq_value);

double multipartite_rate_sum(const MultipartiteState& s,
                             const std::vector<std::vector<std::string>>& parts,
                             double iind_value);

struct MultipartiteDecomposition {
  double s_total = 0.0;            // rate with all systems together
  double quantum_correction = 0.0; // (I(A_1:..:A_N) - I(alpha_1:..:alpha_N)) / 2
  double rate_sum = 0.0;           // s_total + quantum_correction
  double direct_form = 0.0;        // (1/2) J - (1/2) I(alpha_1:..:alpha_N)
  double exact_mi_residual = 0.0;  // trace-norm residual of (alphas : R) productness
};

/// Decomposed rate sum for an exact split: each part A_i = alpha_i (x) a_i,
/// with the alphas jointly product with the reference.
MultipartiteDecomposition multipartite_decomposed(
    const MultipartiteState& s, const std::vector<std::vector<std::string>>& parts,
    const std::vector<std::vector<std::string>>& alphas);

}  // namespace qmi
