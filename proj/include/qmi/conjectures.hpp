#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmi/types.hpp"

namespace qmi {

// ---------------------------------------------------------------------------
// No-locking harness: for rho_XAB with product AB marginal, test whether the
// logarithmic negativity across XA:B can exceed log2 |X|.
// ---------------------------------------------------------------------------

struct Conj5Params {
  int dim_x = 2;
  int dim_a = 2;
  int dim_b = 2;
  int dim_g = 0;    // 0 = automatic minimal environment
  int rank_a = 0;   // 0 = full rank
  int rank_b = 0;
  int ascent_evals = 2000;  // budget when optimizing
};

struct TrialRecord {
  std::uint64_t seed = 0;
  long index = -1;
  Conj5Params params;
  double log_neg = 0.0;
  double slack = 0.0;          // log2 |X| - E_N
  bool optimized = false;
  long evaluations = 0;        // ascent objective evaluations
  double marginal_residual = 0.0;  // || rho_AB - rho_A (x) rho_B ||_1
};

/// Random extension of a product state: purify rho_A (x) rho_B, apply a Haar
/// isometry from the purifier to X (x) G, trace out G. The AB marginal is
/// asserted product per trial; a failure is a generator bug, not evidence.
MultipartiteState gen_product_extension(const MultipartiteState& rho_a,
                                        const MultipartiteState& rho_b, int dim_x,
                                        int dim_g, std::uint64_t seed);

TrialRecord conj5_trial(const Conj5Params& params, std::uint64_t seed,
                        bool optimize = false);

/// Detector control: a correlated (non-product-marginal) rho_XAB whose
/// negativity across XA:B exceeds log2 |X| whenever min(da, db) > dx.
TrialRecord conj5_control_trial(const Conj5Params& params);

struct Conj5Summary {
  long trials = 0;
  long optimized_trials = 0;
  double min_slack = 0.0;
  TrialRecord argmin;
  std::vector<long> histogram;   // slack counts over [0, max_slack) bins
  double hist_lo = 0.0, hist_hi = 0.0;
  std::vector<TrialRecord> violations;  // slack < -tolerance
};

Conj5Summary conj5_search(const Conj5Params& params, long trials, std::uint64_t seed,
                          long optimized_trials = 0, int jobs = 1);

/// Rebuild a trial bit-identically from its record.
TrialRecord conj5_replay(const TrialRecord& rec);

/// The state a trial record describes (for violation certificates).
MultipartiteState conj5_trial_state(const Conj5Params& params, std::uint64_t seed,
                                    bool optimize = false);

// ---------------------------------------------------------------------------
// Constant-expectation product operators (support-projector condition)
// ---------------------------------------------------------------------------

struct OperatorPair {
  Mat op_a, op_b;          // traceless, unit Frobenius norm
  double constant = 0.0;   // Pi (A (x) B) Pi = c Pi on the support
  double residual = 0.0;   // Frobenius norm of the defect
  double margin_a = 0.0;   // identity distance of the raw operators
  double margin_b = 0.0;
};

struct Conj4Check {
  bool holds = false;
  double constant = 0.0;
  double residual = 0.0;
};

/// Finite check for the condition <psi| A (x) B |psi> = const on supp(rho):
/// by polarization this is Pi (A (x) B) Pi = c Pi. Identity components are
/// projected out and the operators normalized first, so the decision is
/// invariant under A -> uA + v1, B -> wB + x1.
Conj4Check conj4_check(const MultipartiteState& rho_ab, const Mat& op_a, const Mat& op_b,
                       double tol);

/// Alternating least squares over Hermitian traceless unit-norm operators;
/// returns a pair with residual <= tol when one is found.
std::optional<OperatorPair> conj4_search(const MultipartiteState& rho_ab,
                                         std::uint64_t seed, int restarts = 8);

// ---------------------------------------------------------------------------
// Local-Eve example state
// ---------------------------------------------------------------------------

/// sum_ij p_ij |ij><ij| (x) ((1-p) 1/d + p |i><i|) (x) ((1-p) 1/d + p |j><j|)
/// on labels A, B, E1, E2.
MultipartiteState build_local_eve_state(const Eigen::MatrixXd& p_matrix, double p, int d);

}  // namespace qmi
