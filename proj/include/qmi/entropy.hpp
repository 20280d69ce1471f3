#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qmi/types.hpp"

namespace qmi {

// All entropies are base-2 (bits / qubits); 0 log 0 := 0 and eigenvalues
// below the entropy cutoff are treated as exact zeros.

/// Named functional values, in insertion order for stable rendering.
using EntropicReport = std::vector<std::pair<std::string, double>>;

double binary_entropy(double p);
double shannon_entropy_of(const Eigen::VectorXd& probs);

double vn_entropy(const MultipartiteState& s);
double vn_entropy(const Mat& rho);

/// Entropy of the reduced state on `part`.
double entropy_of(const MultipartiteState& s, const std::vector<std::string>& part);

/// S(rho || sigma); +infinity iff supp(rho) is not contained in supp(sigma).
double relative_entropy(const Mat& rho, const Mat& sigma);

double mutual_info(const MultipartiteState& s, const std::vector<std::string>& part_a,
                   const std::vector<std::string>& part_b);
double multi_info(const MultipartiteState& s,
                  const std::vector<std::vector<std::string>>& parts);
double cond_mutual_info(const MultipartiteState& s, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& e);
double coherent_info(const MultipartiteState& s, const std::vector<std::string>& a,
                     const std::vector<std::string>& b);

/// S(A_1) + ... + S(A_N) + S(A_1...A_N).
double j_quantity(const MultipartiteState& s,
                  const std::vector<std::vector<std::string>>& parts);

/// Continuity bound 2 e log2(dim) + (1+e) H2(e/(1+e)).
double af_bound(double epsilon, int dim_a);

/// Single-subsystem entropies, total entropy, multi-information and the
/// J-quantity of a state; pairwise quantities when bipartite.
EntropicReport standard_report(const MultipartiteState& s);

}  // namespace qmi
