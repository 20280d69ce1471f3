#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmi/measures.hpp"
#include "qmi/types.hpp"

namespace qmi {

struct ExactMiReport {
  bool is_exact = false;
  double residual = 0.0;  // || rho_keyR - rho_key (x) rho_R ||_1
  double mutual_information = 0.0;
  double mi_half = 0.0;
};

/// Exact mutual independence check: purify, trace the shields (complement of
/// `key`), and test that the key is product with the purifying reference and
/// correlated.
ExactMiReport check_exact_mi(const MultipartiteState& s,
                             const std::vector<std::string>& key = {"A", "B"});

struct TwistingExtraction {
  Isometry twist;             // shields -> (C, D)
  MultipartiteState psi_key;  // pure state on key + C
  MultipartiteState rho_junk; // density on D
  double reconstruction_error = 0.0;
};

/// Constructive normal form for exact mutual independence: an isometry on the
/// shield systems taking the state to psi_{keyC} (x) rho_D, found by aligning
/// the Schmidt decompositions of two purifications across the keyR : rest cut.
TwistingExtraction extract_twisting(const MultipartiteState& s,
                                    const std::vector<std::string>& key = {"A", "B"});

/// Private-state constructor: |key_psi> on (A,B,C) tensored with a shield
/// state on D, then an inverse twisting unitary on C(x)D distributed into
/// shields A', B' with dim(A') = dim_a_prime.
MultipartiteState make_private_state(const MultipartiteState& key_psi,
                                     const MultipartiteState& junk,
                                     const std::optional<Mat>& twist, int dim_a_prime);

/// d-level GHZ key plus a mixed qubit shield; twist defaults to identity.
MultipartiteState make_pdit(int d, const std::optional<Mat>& twist = {});
MultipartiteState make_pbit(const std::optional<Mat>& twist = {},
                            const std::optional<MultipartiteState>& noise = {});
MultipartiteState ghz_key(int d);

struct MaxcorrBound {
  double bound = 0.0;               // max(0, coherent information / 2)
  double coherent_information = 0;  // S(B) - S(AB)
  double ccq_audit = 0.0;           // I(A:B) - I(A:R) on the dephased state
};

/// Hashing lower bound for maximally correlated states; throws if the input
/// is not of the form sum_ij a_ij |ii><jj| within tolerance.
MaxcorrBound maxcorr_hashing_bound(const MultipartiteState& s);
bool is_maximally_correlated(const MultipartiteState& s, double tol = 1e-10);

/// Local factorizations A = alpha (x) a, B = beta (x) b (row-major,
/// extracted part first).
struct SplitDims {
  int d_alpha = 1, d_a = 1, d_beta = 1, d_b = 1;
};

struct SubsystemSplit {
  Mat u_a, u_b;  // local unitaries applied before the factorization
  SplitDims dims;
};

struct IndependenceReport {
  double lower_bound = 0.0;
  std::string lower_method;
  double residual_independence = 0.0;  // I(alpha beta : R) at the reporting split
  double upper_esq = 0.0;
  double upper_er_ppt = -1.0;  // < 0 when not computed
  bool upper_er_is_conjectural = true;  // valid under the no-locking conjecture
  double mi_half = 0.0;  // (1/2) I(alpha:beta) at the reporting split
};

struct SplitSearchOptions {
  std::uint64_t seed = 0;
  int restarts = -1;       // < 0 uses defaults::split_restarts
  double penalty = -1.0;   // < 0 uses defaults::split_penalty (doubled per restart)
  double feas_tol = -1.0;  // < 0 uses defaults::split_feasibility_tol
  int max_evals = -1;      // < 0 uses defaults::split_max_evals
  int jobs = 1;
};

struct SplitSearchResult {
  SubsystemSplit best;
  double lower_bound = 0.0;          // (1/2) I(alpha:beta) when feasible, else 0
  double mi_half = 0.0;              // (1/2) I(alpha:beta) at the best split
  double residual_mi = 0.0;          // I(alpha beta : R)
  double residual_trace_norm = 0.0;  // || rho_abR - rho_ab (x) rho_R ||_1
  bool feasible = false;
  double objective = 0.0;
  long evaluations = 0;
};

/// Single-copy heuristic lower bound: maximize (1/2) I(alpha:beta) -
/// mu I(alpha beta:R) over local unitaries parameterized by Givens rotations
/// with phases, from the identity plus seeded random starts.
SplitSearchResult split_search_lower(const MultipartiteState& rho_ab,
                                     const SplitDims& split,
                                     const SplitSearchOptions& opts = {});

struct MiBoundsOptions {
  std::vector<std::string> key;  // empty = {"A","B"} when present, else first two labels
  bool run_split_search = true;
  bool run_er_ppt = false;  // expensive, off by default
  SplitSearchOptions split;
  EsqUpperOptions esq;
  RelEntPptOptions er;
};

/// Assembles certified lower bounds (exact-MI route, maximally correlated
/// route, split search) with the heuristic upper bounds.
IndependenceReport mi_bounds(const MultipartiteState& s, const MiBoundsOptions& opts = {});

}  // namespace qmi
