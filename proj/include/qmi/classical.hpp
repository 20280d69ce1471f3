#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmi/types.hpp"

namespace qmi {

struct Alphabet {
  std::string label;
  int size = 0;
};

/// Nonnegative tensor over labeled finite alphabets, row-major flattening,
/// summing to one.
struct JointDistribution {
  std::vector<Alphabet> alphabets;
  std::vector<double> probs;

  long total_size() const;
  int position(const std::string& label) const;
  int size_of(const std::string& label) const;
  std::vector<std::string> labels() const;
};

void validate_distribution(const JointDistribution& p);

/// Marginal over `keep` (original order preserved).
JointDistribution marginal(const JointDistribution& p, const std::vector<std::string>& keep);

double shannon_entropy(const JointDistribution& p, const std::vector<std::string>& part);
double classical_mi(const JointDistribution& p, const std::vector<std::string>& a,
                    const std::vector<std::string>& b);
double classical_cmi(const JointDistribution& p, const std::vector<std::string>& a,
                     const std::vector<std::string>& b, const std::vector<std::string>& z);

/// H(XY): the distributed rate sum achievable when the reference knows
/// everything.
double slepian_wolf_sum(const JointDistribution& p,
                        const std::vector<std::string>& xy = {"X", "Y"});

/// Redundant decomposition of P_{XY|Z}: support points grouped into classes
/// with z-independent within-class conditionals. tau maps each support point
/// to (l, j, k); j is trivial here (one class per block).
struct RedundantDecomposition {
  struct Block {
    int l = 0;
    std::vector<long> members;    // support points (flat XY index, lex order)
    std::vector<double> p_k;      // z-independent within-class distribution
  };
  std::vector<Block> blocks;
  std::map<long, std::array<int, 3>> tau;     // flat XY index -> (l, j, k)
  std::vector<std::vector<double>> q_l_given_z;  // [z][l]
  double reconstruction_error = 0.0;  // max_z max-abs entry defect
  double h_lj = 0.0;                  // entropy of the (L, J) marginal
};

RedundantDecomposition ki_decompose(const JointDistribution& p,
                                    const std::vector<std::string>& xy = {"X", "Y"});

/// H(LJ) of the finest redundant decomposition.
double optimal_rate_hlj(const JointDistribution& p,
                        const std::vector<std::string>& xy = {"X", "Y"});

/// P(00c) = P(11c) = p/2, P(01a) = P(10a) = (1-p)/2 on labels X, Y, Z.
JointDistribution make_corr_anticorr(double p);

/// Row-stochastic table applying a local randomized function.
using StochasticTable = std::vector<std::vector<double>>;

struct ClassicalMindepResult {
  double mi_ab = 0.0;           // I(F(X):G(Y))
  double residual = 0.0;        // I(F(X)G(Y):Z)
  double rate = 0.0;            // mi_ab when residual <= 1e-9, else 0
  bool feasible = false;
  double protocol_bound = 0.0;  // max(0, I - I_AZ - I_BZ)
};

ClassicalMindepResult classical_mindep_rate(const JointDistribution& p,
                                            const StochasticTable& f_table,
                                            const StochasticTable& g_table);

struct HashSimResult {
  double tv_from_product = 0.0;  // empirical TV of (hash outputs, Z^n) from product
  double std_error = 0.0;        // histogram-based standard-error estimate
  double rate = 0.0;             // out_bits / n
  long observed_cells = 0;
};

/// Samples n-fold i.i.d. strings, hashes X^n and Y^n through random GF(2)
/// matrices to out_bits each, and estimates the total-variation distance of
/// (U_A, U_B, Z^n) from (U_A, U_B) (x) Z^n from the empirical histogram.
HashSimResult hash_sim(const JointDistribution& p, int n, int out_bits, long trials,
                       std::uint64_t seed);

}  // namespace qmi
