#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmi/types.hpp"

namespace qmi {

struct IsotropicParams {
  double fidelity = 1.0;  // overlap with the maximally entangled state
  int d = 2;              // local dimension
};

struct OptimizerCertificate {
  Mat sigma_star;            // minimizing state, empty if not applicable
  int iterations = 0;        // iterations of the winning restart
  int restarts = 0;
  double residual = 0.0;     // context-dependent, see `method`
  double restart_spread = 0.0;
  bool converged = true;
};

struct MeasureResult {
  double value = 0.0;
  std::string method;
  std::optional<OptimizerCertificate> certificate;
};

/// A label bipartition of a state; `a_side` keeps its side, the complement is
/// the other side.
struct Cut {
  std::vector<std::string> a_side;
};
std::vector<std::string> cut_b_side(const MultipartiteState& s, const Cut& cut);

/// log2 of the trace norm of the partial transpose across the cut.
double log_negativity(const MultipartiteState& s, const Cut& cut);

/// F Phi_d + (1-F)(1 - Phi_d)/(d^2-1) on labels A, B.
MultipartiteState isotropic_state(const IsotropicParams& p);
MultipartiteState maximally_entangled(int d, const std::string& label_a = "A",
                                      const std::string& label_b = "B");

/// Exact two-parameter projection onto the isotropic family: the output is
/// the isotropic state with the input's fidelity with Phi_d.
MultipartiteState uu_twirl(const MultipartiteState& s);
double entangled_fraction(const MultipartiteState& s);

struct RelEntPptOptions {
  int restarts = -1;   // < 0 uses defaults::er_restarts
  int max_iters = -1;  // < 0 uses defaults::er_max_iters
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// min over PPT sigma of S(rho || sigma) by projected gradient descent with
/// seeded restarts; lower-bounds the separable-set relative entropy of
/// entanglement beyond 2x2 / 2x3 where the two sets coincide.
MeasureResult rel_ent_ppt(const MultipartiteState& s, const Cut& cut,
                          const RelEntPptOptions& opts = {});

/// 1-D oracle for twirlable inputs: min over PPT isotropic states of the
/// binary relative entropy of the spectra.
double rel_ent_ppt_isotropic_oracle(double fidelity, int d);

struct EsqUpperOptions {
  int ext_dim = -1;  // < 0 uses defaults::esq_ext_dim
  int trials = -1;   // < 0 uses defaults::esq_trials
  int g_dim = 0;     // 0 = automatic (ceil(rank / ext_dim))
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Heuristic squashed-entanglement upper bound: min of (1/2) I(A:B|E) over
/// sampled extensions plus the deterministic trivial and (for product-basis
/// diagonal states) classical copying extensions.
MeasureResult esq_upper(const MultipartiteState& s, const Cut& cut,
                        const EsqUpperOptions& opts = {});

}  // namespace qmi
