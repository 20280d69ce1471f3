#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmi/compression.hpp"
#include "qmi/entropy.hpp"
#include "qmi/linalg.hpp"
#include "qmi/measures.hpp"
#include "qmi/mindep.hpp"
#include "qmi/rng.hpp"
#include "qmi/tensor.hpp"
#include "test_util.hpp"

using namespace qmi;

namespace {

// Embed rho_AB as a four-part split state with trivial retained or sent parts.
MultipartiteState with_trivial_parts(const MultipartiteState& rho_ab, bool alpha_trivial) {
  MultipartiteState triv_a{Mat::Identity(1, 1), {{"ta", 1}}, StateKind::density};
  MultipartiteState triv_b{Mat::Identity(1, 1), {{"tb", 1}}, StateKind::density};
  MultipartiteState s = tensor_product(tensor_product(densify(rho_ab), triv_a), triv_b);
  if (alpha_trivial) {
    // a = A, alpha trivial; b = B, beta trivial.
    s = permute_subsystems(s, {"A", "ta", "B", "tb"});
    s.dims[0].label = "a";
    s.dims[1].label = "alpha";
    s.dims[2].label = "b";
    s.dims[3].label = "beta";
  } else {
    // alpha = A (all retained), a trivial; beta = B, b trivial.
    s = permute_subsystems(s, {"ta", "A", "tb", "B"});
    s.dims[0].label = "a";
    s.dims[1].label = "alpha";
    s.dims[2].label = "b";
    s.dims[3].label = "beta";
  }
  return s;
}

MultipartiteState pbit_as_split(const MultipartiteState& ps) {
  MultipartiteState s = permute_subsystems(ps, {"A'", "A", "B'", "B"});
  s.dims[0].label = "a";
  s.dims[1].label = "alpha";
  s.dims[2].label = "b";
  s.dims[3].label = "beta";
  return s;
}

}  // namespace

TEST_CASE("rate sum from the independence value") {
  CHECK(rate_sum_theorem(test::phi_plus(), 1.0) == doctest::Approx(0.0).epsilon(1e-12));

  Vec zero = Vec::Unit(2, 0);
  const MultipartiteState pure_prod = densify(tensor_product(
      MultipartiteState{zero, {{"A", 2}}, StateKind::pure_vector},
      MultipartiteState{zero, {{"B", 2}}, StateKind::pure_vector}));
  CHECK(rate_sum_theorem(pure_prod, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

  MultipartiteState mm{0.25 * Mat::Identity(4, 4), {{"A", 2}, {"B", 2}}, StateKind::density};
  CHECK(rate_sum_theorem(mm, 0.0) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(rate_sum_theorem(mm, 0.5), std::invalid_argument);  // above I/2
  CHECK_THROWS_AS(rate_sum_theorem(mm, -0.2), std::invalid_argument);
  MultipartiteState tri{Mat::Identity(8, 8) / 8.0,
                        {{"A", 2}, {"B", 2}, {"C", 2}},
                        StateKind::density};
  CHECK_THROWS_AS(rate_sum_theorem(tri, 0.0), std::invalid_argument);
}

TEST_CASE("redistribution rate pair") {
  // Trivial retained parts reproduce the unassisted rate sum J/2.
  const MultipartiteState rho = test::random_bipartite(2, 2, 3, 17);
  const MultipartiteState s = with_trivial_parts(rho, true);
  const RatePoint pt = rate_pair_exact(s, SplitLabels{});
  const double half_j = 0.5 * j_quantity(rho, {{"A"}, {"B"}});
  CHECK(pt.r_a + pt.r_b == doctest::Approx(half_j).epsilon(1e-9));

  // Phi+ with everything retained: rate sum 0.
  const MultipartiteState s2 = with_trivial_parts(test::phi_plus(), false);
  const RatePoint pt2 = rate_pair_exact(s2, SplitLabels{});
  CHECK(pt2.r_a + pt2.r_b == doctest::Approx(0.0).epsilon(1e-9));

  // Private bit with the key split: rate sum J/2 - 1/2.
  const MultipartiteState pb = make_pbit(haar_unitary(4, 21));
  const MultipartiteState split = pbit_as_split(pb);
  const RatePoint pt3 = rate_pair_exact(split, SplitLabels{});
  const double half_j_pb =
      0.5 * j_quantity(split, {{"a", "alpha"}, {"b", "beta"}});
  CHECK(pt3.r_a + pt3.r_b == doctest::Approx(half_j_pb - 0.5).epsilon(1e-8));

  // Exactness precondition enforced.
  const MultipartiteState bad = test::random_bipartite(4, 4, 6, 5);
  MultipartiteState bad4 = split_label(bad, "A", 2, 2, "a", "alpha");
  bad4 = split_label(bad4, "B", 2, 2, "b", "beta");
  CHECK_THROWS_AS(rate_pair_exact(bad4, SplitLabels{}), std::invalid_argument);
}

TEST_CASE("rate sum identity and order invariance") {
  for (int k = 0; k < 8; ++k) {
    const MultipartiteState pb = make_pbit(haar_unitary(4, 100 + k));
    const MultipartiteState split = pbit_as_split(pb);
    const RateSumIdentity id = rate_sum_identity_check(split, SplitLabels{});
    CHECK(id.gap <= 1e-8);

    // Sending b first gives the same sum.
    const RatePoint ab = rate_pair_exact(split, SplitLabels{}, true);
    const RatePoint ba = rate_pair_exact(split, SplitLabels{}, false);
    CHECK(ab.r_a + ab.r_b == doctest::Approx(ba.r_a + ba.r_b).epsilon(1e-9));
  }
  for (int d : {2, 3}) {
    const MultipartiteState pd = make_pdit(d, haar_unitary(2 * d, 55 + d));
    const RateSumIdentity id = rate_sum_identity_check(pbit_as_split(pd), SplitLabels{});
    CHECK(id.gap <= 1e-8);
  }
  // Phi+ with trivial reference.
  const RateSumIdentity idphi =
      rate_sum_identity_check(with_trivial_parts(test::phi_plus(), false), SplitLabels{});
  CHECK(idphi.gap <= 1e-10);
}

TEST_CASE("corner points") {
  const auto phi_pts = corner_points(test::phi_plus());
  CHECK(phi_pts[0].r_a == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(phi_pts[0].r_b == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phi_pts[1].r_a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phi_pts[1].r_b == doctest::Approx(0.0).epsilon(1e-10));

  MultipartiteState mm{0.25 * Mat::Identity(4, 4), {{"A", 2}, {"B", 2}}, StateKind::density};
  const auto mm_pts = corner_points(mm);
  for (const auto& p : mm_pts) {
    CHECK(p.r_a == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p.r_b == doctest::Approx(1.0).epsilon(1e-10));
  }

  // Corner rate sums equal J/2 and entropies come out as expected on the
  // classically correlated pair.
  const MultipartiteState cc = test::classically_correlated();
  const double half_j = 0.5 * j_quantity(cc, {{"A"}, {"B"}});
  for (const auto& p : corner_points(cc)) {
    CHECK(p.r_a + p.r_b == doctest::Approx(half_j).epsilon(1e-9));
  }
  CHECK(corner_points(cc)[0].r_b == doctest::Approx(1.0).epsilon(1e-10));  // S(B)

  // Conjectural corners are flagged.
  const auto conj = conjectural_corner_points(cc, 0.25);
  CHECK(conj[0].assumptions.find("open") != std::string::npos);
}

TEST_CASE("converse bounds") {
  // Pure global state: trivial reference, no per-party floor.
  const ConverseBounds cb = converse_bounds(test::phi_plus(), 1.0);
  CHECK(cb.r_a_min == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(cb.r_b_min == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(cb.sum_min == doctest::Approx(0.0).epsilon(1e-10));

  const MultipartiteState prod =
      tensor_product(random_density(2, 2, 3, "A"), random_density(2, 2, 4, "B"));
  const ConverseBounds cb2 = converse_bounds(prod, 0.0);
  CHECK(cb2.sum_min ==
        doctest::Approx(0.5 * j_quantity(prod, {{"A"}, {"B"}})).epsilon(1e-10));

  // Achievable sums sit above the converse.
  for (int k = 0; k < 6; ++k) {
    const MultipartiteState pb = make_pbit(haar_unitary(4, 300 + k));
    const MultipartiteState split = pbit_as_split(pb);
    const RatePoint pt = rate_pair_exact(split, SplitLabels{});
    MultipartiteState merged = permute_subsystems(split, {"a", "alpha", "b", "beta"});
    merged = merge_labels(merged, {"a", "alpha"}, "A");
    merged = merge_labels(merged, {"b", "beta"}, "B");
    const double esq = 0.5 * mutual_info(merged, {"A"}, {"B"});  // valid upper bound
    const ConverseBounds cb3 = converse_bounds(merged, esq);
    CHECK(pt.r_a + pt.r_b >= cb3.sum_min - 1e-8);
  }
}

TEST_CASE("multipartite rate formulas") {
  // Two parties reduce to the bipartite theorem.
  const MultipartiteState rho = test::random_bipartite(2, 3, 4, 7);
  CHECK(multipartite_rate_sum(rho, {{"A"}, {"B"}}, 0.1) ==
        doctest::Approx(rate_sum_theorem(rho, 0.1)).epsilon(1e-12));

  // GHZ-3 with the full split retained: rate sum 0.
  Vec ghz = Vec::Zero(8);
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  const MultipartiteState g3 =
      densify(MultipartiteState{ghz, {{"A", 2}, {"B", 2}, {"C", 2}}, StateKind::pure_vector});
  const double iind = 0.5 * multi_info(g3, {{"A"}, {"B"}, {"C"}});
  CHECK(iind == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(multipartite_rate_sum(g3, {{"A"}, {"B"}, {"C"}}, iind) ==
        doctest::Approx(0.0).epsilon(1e-10));

  const MultipartiteDecomposition dec =
      multipartite_decomposed(g3, {{"A"}, {"B"}, {"C"}}, {{"A"}, {"B"}, {"C"}});
  CHECK(dec.exact_mi_residual <= 1e-10);
  CHECK(dec.rate_sum == doctest::Approx(dec.direct_form).epsilon(1e-9));
  CHECK(dec.rate_sum == doctest::Approx(0.0).epsilon(1e-9));

  // Product of mixed parties: rate S(total), correction 0 (trivial alphas).
  const MultipartiteState p3 = tensor_product(
      tensor_product(random_density(2, 2, 11, "A"), random_density(2, 2, 12, "B")),
      random_density(2, 2, 13, "C"));
  const MultipartiteDecomposition dp =
      multipartite_decomposed(p3, {{"A"}, {"B"}, {"C"}}, {{}, {}, {}});
  CHECK(dp.exact_mi_residual <= 1e-10);
  CHECK(dp.quantum_correction == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(dp.rate_sum == doctest::Approx(entropy_of(p3, {"A", "B", "C"})).epsilon(1e-9));

  // Planted exact split on a random-twisted private state.
  const MultipartiteState pb = make_pbit(haar_unitary(4, 444));
  const MultipartiteDecomposition d2 =
      multipartite_decomposed(pb, {{"A", "A'"}, {"B", "B'"}}, {{"A"}, {"B"}});
  CHECK(d2.exact_mi_residual <= 1e-8);
  CHECK(d2.rate_sum == doctest::Approx(d2.direct_form).epsilon(1e-9));
}
