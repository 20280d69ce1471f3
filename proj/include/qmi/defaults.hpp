#pragma once

// Central numerical tolerances and solver defaults. Everything tunable lives
// here so that reports can print the active configuration for provenance.

namespace qmi::defaults {

inline constexpr double herm_tol = 1e-10;        // max |M - M^+| entry for density inputs
inline constexpr double trace_tol = 1e-10;       // |Tr rho - 1|
inline constexpr double psd_tol = 1e-10;         // eigenvalues >= -psd_tol
inline constexpr double isometry_tol = 1e-10;    // max |V^+ V - 1| entry
inline constexpr double rank_cutoff = 1e-12;     // numerical rank / support threshold
inline constexpr double entropy_cutoff = 1e-12;  // eigenvalues below are exact zeros in sums

inline constexpr double exact_mi_residual_tol = 1e-8;  // ||rho_ABR - rho_AB (x) rho_R||_1
inline constexpr double correlation_tol = 1e-8;        // I(A:B) above this counts as correlated
inline constexpr double twist_reconstruction_tol = 1e-7;

inline constexpr double split_feasibility_tol = 1e-6;  // trace-norm residual for a feasible split
inline constexpr double split_penalty = 10.0;          // initial penalty weight, doubled per restart
inline constexpr int split_restarts = 8;
inline constexpr int split_max_evals = 20000;

inline constexpr int er_restarts = 8;        // random starts besides the maximally mixed one
inline constexpr int er_max_iters = 5000;
inline constexpr double er_rel_tol = 1e-9;   // relative objective change stopping rule
inline constexpr double er_ppt_cert_tol = 1e-8;

inline constexpr int esq_trials = 16;
inline constexpr int esq_ext_dim = 2;

inline constexpr double conj4_residual_tol = 1e-8;
inline constexpr double conj4_identity_margin = 1e-6;
inline constexpr double conj5_violation_tol = 1e-7;  // slack below -tol is a violation

}  // namespace qmi::defaults
