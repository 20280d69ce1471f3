#include "qmi/conjectures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

#include "qmi/defaults.hpp"
#include "qmi/entropy.hpp"
#include "qmi/linalg.hpp"
#include "qmi/measures.hpp"
#include "qmi/parallel.hpp"
#include "qmi/rng.hpp"
#include "qmi/tensor.hpp"

namespace qmi {

// ---------------------------------------------------------------------------
// No-locking harness
// ---------------------------------------------------------------------------

MultipartiteState gen_product_extension(const MultipartiteState& rho_a,
                                        const MultipartiteState& rho_b, int dim_x,
                                        int dim_g, std::uint64_t seed) {
  if (dim_x < 1 || dim_g < 1)
    throw std::invalid_argument("gen_product_extension: dims must be >= 1");
  MultipartiteState a = densify(rho_a);
  MultipartiteState b = densify(rho_b);
  a.dims[0].label = "A";
  b.dims[0].label = "B";
  const MultipartiteState prod = tensor_product(a, b);
  const MultipartiteState psi = purify(prod, "P");
  const int rank = psi.dims.back().dim;
  if (static_cast<long>(dim_x) * dim_g < rank)
    throw std::invalid_argument("gen_product_extension: dim_x * dim_g < rank(rho_A (x) rho_B)");

  const Isometry w = haar_isometry({{"P", rank}}, {{"X", dim_x}, {"G", dim_g}}, seed);
  const MultipartiteState ext = apply_isometry(psi, w);
  MultipartiteState rho_xab = partial_trace(ext, {"A", "B", "X"});
  rho_xab = permute_subsystems(rho_xab, {"X", "A", "B"});

  const MultipartiteState marg = partial_trace(rho_xab, {"A", "B"});
  const double res = trace_norm(marg.matrix - prod.matrix);
  if (res > 1e-10)
    throw std::runtime_error(
        "gen_product_extension: generator bug, AB marginal not product (residual = " +
        std::to_string(res) + ")");
  return rho_xab;
}

namespace {

struct TrialSetup {
  MultipartiteState rho_a, rho_b;
  MultipartiteState psi;  // purification of rho_A (x) rho_B on P
  int rank = 0;
  int dim_g = 0;
};

TrialSetup conj5_setup(const Conj5Params& params, std::uint64_t seed) {
  TrialSetup ts;
  const int ra = params.rank_a > 0 ? params.rank_a : params.dim_a;
  const int rb = params.rank_b > 0 ? params.rank_b : params.dim_b;
  ts.rho_a = random_density(params.dim_a, ra, derive_seed(seed, 0), "A");
  ts.rho_b = random_density(params.dim_b, rb, derive_seed(seed, 1), "B");
  const MultipartiteState prod = tensor_product(ts.rho_a, ts.rho_b);
  ts.psi = purify(prod, "P");
  ts.rank = ts.psi.dims.back().dim;
  ts.dim_g = params.dim_g > 0 ? params.dim_g
                              : (ts.rank + params.dim_x - 1) / params.dim_x;
  if (static_cast<long>(params.dim_x) * ts.dim_g < ts.rank)
    throw std::invalid_argument("conj5: dim_x * dim_g < purifier rank");
  return ts;
}

double conj5_negativity(const TrialSetup& ts, const Conj5Params& params, const Mat& w) {
  const Isometry iso{w, {{"P", ts.rank}}, {{"X", params.dim_x}, {"G", ts.dim_g}}};
  const MultipartiteState ext = apply_isometry(ts.psi, iso);
  const MultipartiteState rho_xab = partial_trace(ext, {"A", "B", "X"});
  return log_negativity(rho_xab, Cut{{"X", "A"}});
}

// Final isometry of a trial: the Haar start, optionally improved by a
// deterministic compass ascent on a unitary applied after it.
Mat conj5_final_isometry(const TrialSetup& ts, const Conj5Params& params,
                         std::uint64_t seed, bool optimize, double* out_log_neg,
                         long* out_evals) {
  const Mat w0 = haar_isometry_matrix(ts.rank, params.dim_x * ts.dim_g, derive_seed(seed, 2));
  double best = conj5_negativity(ts, params, w0);
  long evals = 1;
  Mat w = w0;
  if (optimize) {
    const int dout = params.dim_x * ts.dim_g;
    const int np = unitary_param_count(dout);
    std::vector<double> p(np, 0.0);
    double step = M_PI / 4.0;
    while (step > 1e-3 && evals < params.ascent_evals) {
      bool improved = false;
      for (int i = 0; i < np && evals < params.ascent_evals; ++i) {
        for (const double sgn : {+1.0, -1.0}) {
          std::vector<double> cand = p;
          cand[i] += sgn * step;
          const Mat wc = unitary_from_params(cand.data(), dout) * w0;
          const double v = conj5_negativity(ts, params, wc);
          ++evals;
          if (v > best + 1e-12) {
            p = std::move(cand);
            best = v;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    w = unitary_from_params(p.data(), dout) * w0;
  }
  *out_log_neg = best;
  *out_evals = evals;
  return w;
}

}  // namespace

MultipartiteState conj5_trial_state(const Conj5Params& params, std::uint64_t seed,
                                    bool optimize) {
  const TrialSetup ts = conj5_setup(params, seed);
  double log_neg = 0.0;
  long evals = 0;
  const Mat w = conj5_final_isometry(ts, params, seed, optimize, &log_neg, &evals);
  const Isometry iso{w, {{"P", ts.rank}}, {{"X", params.dim_x}, {"G", ts.dim_g}}};
  const MultipartiteState ext = apply_isometry(ts.psi, iso);
  MultipartiteState rho_xab = partial_trace(ext, {"A", "B", "X"});
  return permute_subsystems(rho_xab, {"X", "A", "B"});
}

TrialRecord conj5_trial(const Conj5Params& params, std::uint64_t seed, bool optimize) {
  const TrialSetup ts = conj5_setup(params, seed);

  TrialRecord rec;
  rec.seed = seed;
  rec.params = params;
  rec.params.dim_g = ts.dim_g;
  rec.optimized = optimize;

  double log_neg = 0.0;
  const Mat w = conj5_final_isometry(ts, params, seed, optimize, &log_neg, &rec.evaluations);

  // Marginal-product assertion on the trial state; the local ascent acts on
  // the purifier only, so the marginal is shared by every W.
  {
    const Isometry iso{w, {{"P", ts.rank}}, {{"X", params.dim_x}, {"G", ts.dim_g}}};
    const MultipartiteState ext = apply_isometry(ts.psi, iso);
    const MultipartiteState marg = partial_trace(ext, {"A", "B"});
    const MultipartiteState prod = tensor_product(ts.rho_a, ts.rho_b);
    rec.marginal_residual = trace_norm(marg.matrix - prod.matrix);
    if (rec.marginal_residual > 1e-10)
      throw std::runtime_error("conj5_trial: generator bug, AB marginal not product");
  }

  rec.log_neg = log_neg;
  rec.slack = std::log2(static_cast<double>(params.dim_x)) - log_neg;
  return rec;
}

TrialRecord conj5_control_trial(const Conj5Params& params) {
  // Maximally entangled state between the composite XA and B; the AB marginal
  // is deliberately correlated, so slack goes negative when min(dxa, db) > dx.
  const int dxa = params.dim_x * params.dim_a;
  const int d = std::min(dxa, params.dim_b);
  Vec psi = Vec::Zero(static_cast<long>(dxa) * params.dim_b);
  for (int i = 0; i < d; ++i)
    psi[static_cast<long>(i) * params.dim_b + i] = 1.0 / std::sqrt(d);
  MultipartiteState s;
  s.matrix = psi;
  s.dims = {{"XA", dxa}, {"B", params.dim_b}};
  s.kind = StateKind::pure_vector;
  MultipartiteState rho = densify(s);
  rho = split_label(rho, "XA", params.dim_x, params.dim_a, "X", "A");

  TrialRecord rec;
  rec.params = params;
  rec.optimized = false;
  rec.log_neg = log_negativity(rho, Cut{{"X", "A"}});
  rec.slack = std::log2(static_cast<double>(params.dim_x)) - rec.log_neg;
  const MultipartiteState marg = partial_trace(rho, {"A", "B"});
  const MultipartiteState pa = partial_trace(rho, {"A"});
  const MultipartiteState pb = partial_trace(rho, {"B"});
  rec.marginal_residual = trace_norm(marg.matrix - tensor_product(pa, pb).matrix);
  return rec;
}

TrialRecord conj5_replay(const TrialRecord& rec) {
  return conj5_trial(rec.params, rec.seed, rec.optimized);
}

Conj5Summary conj5_search(const Conj5Params& params, long trials, std::uint64_t seed,
                          long optimized_trials, int jobs) {
  const long total = trials + optimized_trials;
  std::vector<TrialRecord> recs(total);
  parallel_for(total, jobs, [&](long i) {
    const bool opt = i >= trials;
    recs[i] = conj5_trial(params, derive_seed(seed, i), opt);
    recs[i].index = i;
  });

  Conj5Summary sum;
  sum.trials = trials;
  sum.optimized_trials = optimized_trials;
  if (recs.empty()) return sum;
  sum.min_slack = std::numeric_limits<double>::infinity();
  double max_slack = -std::numeric_limits<double>::infinity();
  for (const auto& r : recs) {
    if (r.slack < sum.min_slack) {
      sum.min_slack = r.slack;
      sum.argmin = r;
    }
    max_slack = std::max(max_slack, r.slack);
    if (r.slack < -defaults::conj5_violation_tol) sum.violations.push_back(r);
  }
  constexpr int bins = 32;
  sum.hist_lo = sum.min_slack;
  sum.hist_hi = max_slack;
  sum.histogram.assign(bins, 0);
  const double width = std::max(1e-300, (sum.hist_hi - sum.hist_lo) / bins);
  for (const auto& r : recs) {
    int b = static_cast<int>((r.slack - sum.hist_lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++sum.histogram[b];
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Constant-expectation product operators
// ---------------------------------------------------------------------------

namespace {

Mat traceless_normalized(const Mat& m) {
  const long d = m.rows();
  Mat t = m - (m.trace() / static_cast<double>(d)) * Mat::Identity(d, d);
  const double n = t.norm();
  if (n < 1e-300) return Mat::Zero(d, d);
  return t / n;
}

// Isometry onto supp(rho): columns are eigenvectors above the cutoff.
Mat support_basis(const Mat& rho) {
  const HermEig e = herm_eig(rho);
  int rank = 0;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values[i] > defaults::rank_cutoff) ++rank;
  Mat v(rho.rows(), rank);
  int k = 0;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values[i] > defaults::rank_cutoff) v.col(k++) = e.vectors.col(i);
  return v;
}

}  // namespace

Conj4Check conj4_check(const MultipartiteState& rho_ab, const Mat& op_a, const Mat& op_b,
                       double tol) {
  if (rho_ab.dims.size() != 2)
    throw std::invalid_argument("conj4_check: need a bipartite state");
  const MultipartiteState rho = densify(rho_ab);
  const int da = rho.dims[0].dim, db = rho.dims[1].dim;
  if (op_a.rows() != da || op_a.cols() != da || op_b.rows() != db || op_b.cols() != db)
    throw std::invalid_argument("conj4_check: operator dims do not match the local dims");

  Conj4Check out;
  if (identity_distance(op_a) < defaults::conj4_identity_margin ||
      identity_distance(op_b) < defaults::conj4_identity_margin) {
    out.holds = false;
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  const Mat ta = traceless_normalized(op_a);
  const Mat tb = traceless_normalized(op_b);
  const Mat v = support_basis(rho.matrix);
  const long rank = v.cols();
  const Mat m = v.adjoint() * kron(ta, tb) * v;
  const cxd c = m.trace() / static_cast<double>(rank);
  out.constant = std::real(c);
  out.residual = (m - c * Mat::Identity(rank, rank)).norm();
  out.holds = out.residual <= tol;
  return out;
}

std::optional<OperatorPair> conj4_search(const MultipartiteState& rho_ab,
                                         std::uint64_t seed, int restarts) {
  if (rho_ab.dims.size() != 2)
    throw std::invalid_argument("conj4_search: need a bipartite state");
  const MultipartiteState rho = densify(rho_ab);
  const int da = rho.dims[0].dim, db = rho.dims[1].dim;
  if (da < 2 || db < 2) return std::nullopt;  // no non-trivial operator on a 1-dim local
  const Mat v = support_basis(rho.matrix);
  const long rank = v.cols();
  if (rank >= static_cast<long>(da) * db) return std::nullopt;  // full support: only A,B ~ 1 work

  const auto basis_a = hermitian_traceless_basis(da);
  const auto basis_b = hermitian_traceless_basis(db);

  // Best unit-norm X minimizing ||Pi (X (x) fixed) Pi - c Pi||_F (or the
  // side-swapped problem), as the smallest right singular vector of the
  // compressed linear map.
  auto solve_side = [&](const std::vector<Mat>& basis, const Mat& fixed, bool fixed_is_b,
                        Mat* out_op) -> double {
    const long n = static_cast<long>(basis.size());
    Eigen::MatrixXd k(2 * rank * rank, n);
    for (long col = 0; col < n; ++col) {
      const Mat prod = fixed_is_b ? kron(basis[col], fixed) : kron(fixed, basis[col]);
      Mat m = v.adjoint() * prod * v;
      m -= (m.trace() / static_cast<double>(rank)) * Mat::Identity(rank, rank);
      for (long i = 0; i < rank * rank; ++i) {
        k(2 * i, col) = std::real(m(i / rank, i % rank));
        k(2 * i + 1, col) = std::imag(m(i / rank, i % rank));
      }
    }
    // Full V: with more unknowns than constraint rows the minimizer sits in
    // an exact null space that thin V does not carry.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullV);
    const Eigen::VectorXd x = svd.matrixV().col(n - 1);
    Mat op = Mat::Zero(fixed_is_b ? da : db, fixed_is_b ? da : db);
    for (long i = 0; i < n; ++i) op += x[i] * basis[i];
    *out_op = op;
    return (k * x).norm();
  };

  double best_residual = std::numeric_limits<double>::infinity();
  Mat best_a, best_b;

  // Deterministic diagonal starts, then seeded random Hermitian starts.
  std::vector<Mat> starts;
  for (int kdiag = 1; kdiag < db; ++kdiag) {
    Mat d0 = Mat::Zero(db, db);
    const double norm = 1.0 / std::sqrt(static_cast<double>(kdiag) * (kdiag + 1));
    for (int i = 0; i < kdiag; ++i) d0(i, i) = norm;
    d0(kdiag, kdiag) = -static_cast<double>(kdiag) * norm;
    starts.push_back(d0);
  }
  for (int r = 0; r < restarts; ++r) {
    const Mat g = ginibre(db, db, derive_seed(seed, r));
    starts.push_back(traceless_normalized(hermitian_part(g)));
  }

  for (const auto& start : starts) {
    Mat op_b = start;
    Mat op_a;
    double res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 40; ++it) {
      (void)solve_side(basis_a, op_b, true, &op_a);
      const double r2 = solve_side(basis_b, op_a, false, &op_b);
      if (std::abs(res - r2) < 1e-15) {
        res = r2;
        break;
      }
      res = r2;
    }
    if (res < best_residual) {
      best_residual = res;
      best_a = op_a;
      best_b = op_b;
    }
    if (best_residual <= defaults::conj4_residual_tol * 0.01) break;
  }

  if (best_residual > defaults::conj4_residual_tol) return std::nullopt;
  OperatorPair pair;
  pair.op_a = best_a;
  pair.op_b = best_b;
  pair.margin_a = identity_distance(best_a);
  pair.margin_b = identity_distance(best_b);
  if (pair.margin_a < defaults::conj4_identity_margin ||
      pair.margin_b < defaults::conj4_identity_margin)
    return std::nullopt;
  const Conj4Check chk = conj4_check(rho, best_a, best_b, defaults::conj4_residual_tol);
  pair.constant = chk.constant;
  pair.residual = chk.residual;
  if (!chk.holds) return std::nullopt;
  return pair;
}

// ---------------------------------------------------------------------------
// Local-Eve example state
// ---------------------------------------------------------------------------

MultipartiteState build_local_eve_state(const Eigen::MatrixXd& p_matrix, double p, int d) {
  if (d < 2) throw std::invalid_argument("build_local_eve_state: d must be >= 2");
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("build_local_eve_state: p must be in [0,1]");
  if (p_matrix.rows() != d || p_matrix.cols() != d)
    throw std::invalid_argument("build_local_eve_state: p_matrix must be d x d");
  if (p_matrix.minCoeff() < 0.0 || std::abs(p_matrix.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("build_local_eve_state: p_matrix must be a distribution");

  const Mat eye = Mat::Identity(d, d);
  const long n = static_cast<long>(d) * d * d * d;
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (p_matrix(i, j) <= 0.0) continue;
      Mat eii = Mat::Zero(d, d), ejj = Mat::Zero(d, d);
      eii(i, i) = 1.0;
      ejj(j, j) = 1.0;
      const Mat tau_i = (1.0 - p) * eye / static_cast<double>(d) + p * eii;
      const Mat tau_j = (1.0 - p) * eye / static_cast<double>(d) + p * ejj;
      m += p_matrix(i, j) * kron(kron(eii, ejj), kron(tau_i, tau_j));
    }
  MultipartiteState s;
  s.matrix = m;
  s.dims = {{"A", d}, {"B", d}, {"E1", d}, {"E2", d}};
  s.kind = StateKind::density;
  return s;
}

}  // namespace qmi
