#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmi/defaults.hpp"
#include "qmi/entropy.hpp"
#include "qmi/linalg.hpp"
#include "qmi/measures.hpp"
#include "qmi/mindep.hpp"
#include "qmi/rng.hpp"
#include "qmi/tensor.hpp"
#include "test_util.hpp"

using namespace qmi;

namespace {

// Phi+ on AB next to shield junk on A'B'.
MultipartiteState ebit_with_junk(std::uint64_t seed, int rank = 3) {
  const MultipartiteState junk =
      random_density(std::vector<LabeledDim>{{"A'", 2}, {"B'", 2}}, rank, seed);
  return tensor_product(test::phi_plus(), junk);
}

MultipartiteState random_twisted_private_state(std::uint64_t seed) {
  // Random correlated pure key on (A,B,C), random shield, Haar twist.
  Vec key = Vec::Zero(8);
  Rng rng(seed);
  for (int i = 0; i < 8; ++i) key[i] = rng.complex_gaussian();
  key /= key.norm();
  MultipartiteState key_psi{key, {{"A", 2}, {"B", 2}, {"C", 2}}, StateKind::pure_vector};
  const MultipartiteState junk = random_density(2, 2, derive_seed(seed, 1), "D");
  return make_private_state(key_psi, junk, haar_unitary(4, derive_seed(seed, 2)), 2);
}

}  // namespace

TEST_CASE("check_exact_mi") {
  // Ebit plus junk: product with the reference, correlated, value 1.
  const ExactMiReport r1 = check_exact_mi(ebit_with_junk(1), {"A", "B"});
  CHECK(r1.is_exact);
  CHECK(r1.residual < 1e-10);
  CHECK(r1.mi_half == doctest::Approx(1.0).epsilon(1e-10));

  // Fully product pure state: residual 0 but uncorrelated, so not exact.
  Vec zero = Vec::Unit(2, 0);
  MultipartiteState za{zero, {{"A", 2}}, StateKind::pure_vector};
  MultipartiteState zb{zero, {{"B", 2}}, StateKind::pure_vector};
  const MultipartiteState pp = densify(tensor_product(za, zb));
  const ExactMiReport r2 = check_exact_mi(pp, {"A", "B"});
  CHECK(r2.residual < 1e-10);
  CHECK_FALSE(r2.is_exact);

  // Private bits qualify with at least half a bit.
  const ExactMiReport r3 = check_exact_mi(make_pbit(haar_unitary(4, 5)), {"A", "B"});
  CHECK(r3.is_exact);
  CHECK(r3.mi_half >= 0.5 - 1e-9);

  // Generic correlated mixed states do not.
  const ExactMiReport r4 = check_exact_mi(test::random_bipartite(2, 2, 4, 9), {"A", "B"});
  CHECK_FALSE(r4.is_exact);

  CHECK_THROWS_AS(check_exact_mi(pp, {"A", "Q"}), std::invalid_argument);
}

TEST_CASE("extract_twisting") {
  // Already in normal form: the twist is a relabeling, tiny error.
  const TwistingExtraction t0 = extract_twisting(ebit_with_junk(3), {"A", "B"});
  CHECK(t0.reconstruction_error <= 1e-10);

  // Construct-then-invert round trip on twisted private states.
  for (int k = 0; k < 12; ++k) {
    const MultipartiteState gamma = random_twisted_private_state(1000 + k);
    const ExactMiReport pre = check_exact_mi(gamma, {"A", "B"});
    REQUIRE(pre.residual <= 1e-9);
    const TwistingExtraction tw = extract_twisting(gamma, {"A", "B"});
    CHECK(tw.reconstruction_error <= defaults::twist_reconstruction_tol);
  }

  // d = 3 family: error within tolerance and at least (log2 3)/2 of value.
  const MultipartiteState pd = make_pdit(3, haar_unitary(6, 77));
  const ExactMiReport rep = check_exact_mi(pd, {"A", "B"});
  CHECK(rep.mi_half >= 0.5 * std::log2(3.0) - 1e-9);
  const TwistingExtraction tw3 = extract_twisting(pd, {"A", "B"});
  CHECK(tw3.reconstruction_error <= defaults::twist_reconstruction_tol);

  // Precondition violations propagate as errors, not bad isometries.
  CHECK_THROWS_AS(extract_twisting(test::random_bipartite(2, 2, 4, 5)),
                  std::invalid_argument);
}

TEST_CASE("private state constructors") {
  // Trivial twist, trivial shield, maximally entangled key: value 1.
  Vec phi = Vec::Zero(4);
  phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
  Vec triv = Vec::Ones(1);
  MultipartiteState keyphi{kron(phi, triv), {{"A", 2}, {"B", 2}, {"C", 1}},
                           StateKind::pure_vector};
  MultipartiteState junk1{Mat::Identity(1, 1), {{"D", 1}}, StateKind::density};
  const MultipartiteState ebit_ps = make_private_state(keyphi, junk1, {}, 1);
  const ExactMiReport r0 = check_exact_mi(ebit_ps, {"A", "B"});
  CHECK(r0.is_exact);
  CHECK(r0.mi_half == doctest::Approx(1.0).epsilon(1e-10));

  // Random twists keep exact independence, value >= 1/2.
  const MultipartiteState pb = make_pbit(haar_unitary(4, 31));
  const ExactMiReport r1 = check_exact_mi(pb, {"A", "B"});
  CHECK(r1.is_exact);
  CHECK(r1.mi_half >= 0.5 - 1e-9);

  // d = 4: at least one full bit.
  const MultipartiteState p4 = make_pdit(4, haar_unitary(8, 32));
  const ExactMiReport r2 = check_exact_mi(p4, {"A", "B"});
  CHECK(r2.is_exact);
  CHECK(r2.mi_half >= 1.0 - 1e-9);

  // Shield factorization and twist shape are validated.
  const MultipartiteState junk = random_density(2, 2, 1, "D");
  CHECK_THROWS_AS(make_private_state(ghz_key(2), junk, {}, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_private_state(ghz_key(2), junk, Mat(Mat::Identity(3, 3)), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_private_state(densify(ghz_key(2)), junk, {}, 2),
                  std::invalid_argument);
}

TEST_CASE("maximally correlated hashing bound") {
  // Phi+ as a maximally correlated state: bound 1/2, audit 1.
  const MaxcorrBound b0 = maxcorr_hashing_bound(test::phi_plus());
  CHECK(b0.bound == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(b0.ccq_audit == doctest::Approx(1.0).epsilon(1e-9));

  // Rank-two Bell mixture at eps = 1/4.
  const MaxcorrBound b1 = maxcorr_hashing_bound(test::bell_mixture(0.25));
  const double expected = 0.5 * (1.0 - binary_entropy(0.25));
  CHECK(b1.bound == doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected == doctest::Approx(0.09436093777043356).epsilon(1e-12));
  CHECK(std::abs(b1.ccq_audit - b1.coherent_information) <= 1e-9);

  // eps = 1/2 clips to zero.
  CHECK(maxcorr_hashing_bound(test::bell_mixture(0.5)).bound == doctest::Approx(0.0));

  // Routes agree on random maximally correlated states.
  for (int k = 0; k < 15; ++k) {
    Rng rng(derive_seed(777, k));
    Mat a = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = rng.complex_gaussian();
    a = (a * a.adjoint()).eval();
    a /= a.trace();
    Mat rho = Mat::Zero(9, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rho(i * 3 + i, j * 3 + j) = a(i, j);
    MultipartiteState s{rho, {{"A", 3}, {"B", 3}}, StateKind::density};
    const MaxcorrBound b = maxcorr_hashing_bound(s);
    CHECK(std::abs(b.ccq_audit - b.coherent_information) <= 1e-9);
  }

  CHECK_THROWS_AS(maxcorr_hashing_bound(test::random_bipartite(2, 2, 4, 3)),
                  std::invalid_argument);
}

TEST_CASE("split search" * doctest::timeout(600)) {
  // Planted structure: Phi+ on the first qubit pair, junk correlated with the
  // reference on the second pair.
  const MultipartiteState junk =
      random_density(std::vector<LabeledDim>{{"Ja", 2}, {"Jb", 2}}, 3, 99);
  MultipartiteState planted = tensor_product(test::phi_plus(), junk);
  planted = permute_subsystems(planted, {"A", "Ja", "B", "Jb"});
  planted = merge_labels(planted, {"A", "Ja"}, "A");
  planted = merge_labels(planted, {"B", "Jb"}, "B");

  SplitSearchOptions opts;
  opts.seed = 4;
  opts.restarts = 2;
  opts.jobs = 4;
  const SplitSearchResult res = split_search_lower(planted, SplitDims{2, 2, 2, 2}, opts);
  CHECK(res.feasible);
  CHECK(res.lower_bound >= 1.0 - 1e-6);
  CHECK(res.residual_trace_norm <= defaults::split_feasibility_tol);

  // Never exceeds I(A:B)/2.
  CHECK(res.lower_bound <= 0.5 * mutual_info(planted, {"A"}, {"B"}) + 1e-9);

  // Generic full-rank two-qubit state: only trivial factorizations exist, so
  // the reported bound is zero.
  const MultipartiteState generic = test::random_bipartite(2, 2, 4, 123);
  const SplitSearchResult r2 = split_search_lower(generic, SplitDims{2, 1, 2, 1}, opts);
  CHECK_FALSE(r2.feasible);
  CHECK(r2.lower_bound == 0.0);
  const SplitSearchResult r3 = split_search_lower(generic, SplitDims{1, 2, 1, 2}, opts);
  CHECK(r3.lower_bound <= 1e-12);  // trivial extracted parts carry no correlations

  CHECK_THROWS_AS(split_search_lower(generic, SplitDims{3, 1, 2, 1}, opts),
                  std::invalid_argument);

  // Private bit with the key part as the extracted subsystem.
  MultipartiteState pb = make_pbit(haar_unitary(4, 606));
  pb = permute_subsystems(pb, {"A", "A'", "B", "B'"});
  pb = merge_labels(pb, {"A", "A'"}, "A");
  pb = merge_labels(pb, {"B", "B'"}, "B");
  const SplitSearchResult rpb = split_search_lower(pb, SplitDims{2, 2, 2, 2}, opts);
  CHECK(rpb.feasible);
  CHECK(rpb.lower_bound >= 0.5 - 1e-6);

  // Scrambled planted structure: local Haar rotations hide the split, the
  // search has to undo them.
  const Mat ua = haar_unitary(4, derive_seed(501, 0));
  const Mat ub = haar_unitary(4, derive_seed(502, 0));
  MultipartiteState scr = apply_isometry(planted, Isometry{ua, {{"A", 4}}, {{"A", 4}}});
  scr = apply_isometry(scr, Isometry{ub, {{"B", 4}}, {{"B", 4}}});
  SplitSearchOptions sopts;
  sopts.seed = derive_seed(503, 0);
  sopts.restarts = 3;
  sopts.jobs = 4;
  const SplitSearchResult rs = split_search_lower(scr, SplitDims{2, 2, 2, 2}, sopts);
  CHECK(rs.feasible);
  CHECK(rs.lower_bound >= 1.0 - 1e-4);
}

TEST_CASE("assembled independence bounds") {
  MiBoundsOptions opts;
  opts.esq.trials = 8;
  opts.esq.seed = 3;
  opts.run_split_search = false;

  // Tight sandwich for Phi+.
  const IndependenceReport rp = mi_bounds(test::phi_plus(), opts);
  CHECK(rp.lower_bound == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rp.upper_esq == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rp.lower_bound <= rp.upper_esq + 1e-6);

  // Product state: all zeros.
  const MultipartiteState prod =
      tensor_product(random_density(2, 2, 1, "A"), random_density(2, 2, 2, "B"));
  const IndependenceReport rprod = mi_bounds(prod, opts);
  CHECK(rprod.lower_bound == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rprod.upper_esq <= 1e-9);

  // Private bit: lower at least 1/2, sandwich consistent.
  const IndependenceReport rpb = mi_bounds(make_pbit(haar_unitary(4, 41)), opts);
  CHECK(rpb.lower_bound >= 0.5 - 1e-9);
  CHECK(rpb.lower_bound <= rpb.upper_esq + 1e-6);

  // With the split search enabled, multi-part states search on the merged
  // cut; the planted key split keeps the bound at 1/2 or better.
  MiBoundsOptions with_search = opts;
  with_search.run_split_search = true;
  with_search.split.restarts = 2;
  with_search.split.jobs = 4;
  const IndependenceReport rs = mi_bounds(make_pbit(haar_unitary(4, 42)), with_search);
  CHECK(rs.lower_bound >= 0.5 - 1e-6);
  CHECK(rs.lower_bound <= rs.upper_esq + 1e-6);

  // Sandwich consistency over random states.
  for (int k = 0; k < 25; ++k) {
    const IndependenceReport r = mi_bounds(test::random_bipartite(2, 3, 4, 3000 + k), opts);
    CHECK(r.lower_bound <= r.upper_esq + 1e-6);
    CHECK(r.residual_independence >= -1e-9);
  }
}
