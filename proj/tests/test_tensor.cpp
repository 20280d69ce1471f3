#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmi/defaults.hpp"
#include "qmi/entropy.hpp"
#include "qmi/linalg.hpp"
#include "qmi/rng.hpp"
#include "qmi/tensor.hpp"
#include "test_util.hpp"

using namespace qmi;

namespace {
MultipartiteState qubit_proj(int k, const std::string& label) {
  Mat m = Mat::Zero(2, 2);
  m(k, k) = 1.0;
  return MultipartiteState{m, {{label, 2}}, StateKind::density};
}
}  // namespace

TEST_CASE("tensor_product basics") {
  // 1-dim trivial factor is the identity for the product.
  MultipartiteState trivial{Mat::Identity(1, 1), {{"T", 1}}, StateKind::density};
  const MultipartiteState rho = test::random_bipartite(2, 2, 3, 42);
  const MultipartiteState lifted = tensor_product(trivial, rho);
  CHECK((lifted.matrix - rho.matrix).norm() == doctest::Approx(0.0).epsilon(1e-14));

  // |0><0| (x) |1><1| -> diag(0,1,0,0).
  const MultipartiteState p01 = tensor_product(qubit_proj(0, "A"), qubit_proj(1, "B"));
  CHECK(std::abs(p01.matrix(1, 1) - cxd(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(p01.matrix.trace() - cxd(1.0, 0.0)) < 1e-15);

  // Product states carry no mutual information.
  const MultipartiteState a = random_density(2, 2, 7, "A");
  const MultipartiteState b = random_density(2, 2, 8, "B");
  const MultipartiteState prod = tensor_product(a, b);
  CHECK(mutual_info(prod, {"A"}, {"B"}) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(tensor_product(a, random_density(2, 1, 9, "A")), std::invalid_argument);
}

TEST_CASE("partial_trace") {
  const MultipartiteState phi = test::phi_plus();
  const MultipartiteState ra = partial_trace(phi, {"A"});
  CHECK((ra.matrix - 0.5 * Mat::Identity(2, 2)).norm() < 1e-12);

  const MultipartiteState a = random_density(3, 2, 5, "A");
  const MultipartiteState b = random_density(2, 2, 6, "B");
  const MultipartiteState prod = tensor_product(a, b);
  CHECK((partial_trace(prod, {"A"}).matrix - a.matrix).norm() < 1e-12);
  CHECK((partial_trace(prod, {"B"}).matrix - b.matrix).norm() < 1e-12);

  CHECK_THROWS_AS(partial_trace(prod, {"Q"}), std::invalid_argument);
}

TEST_CASE("purify round trip") {
  for (int dim = 2; dim <= 6; ++dim) {
    const MultipartiteState rho = random_density(dim, (dim + 1) / 2, 100 + dim, "A");
    const MultipartiteState psi = purify(rho, "P");
    CHECK(psi.dims.back().dim == (dim + 1) / 2);
    const MultipartiteState back = partial_trace(psi, {"A"});
    CHECK(trace_norm(back.matrix - rho.matrix) < 1e-10);
  }

  // Pure input purifies with a trivial purifier.
  const MultipartiteState pure = densify(maximally_entangled(2));
  CHECK(purify(pure, "P").dims.back().dim == 1);

  // Maximally mixed qubit: Schmidt coefficients {1/2, 1/2}.
  MultipartiteState mixed{0.5 * Mat::Identity(2, 2), {{"A", 2}}, StateKind::density};
  const MultipartiteState psi = purify(mixed, "P");
  const MultipartiteState red = partial_trace(psi, {"P"});
  const auto eig = herm_eig(red.matrix);
  CHECK(eig.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(0.5).epsilon(1e-12));

  // Rank-3 qutrit: purifier dim 3, Schmidt spectrum equals the eigenvalues.
  const MultipartiteState q3 = random_density(3, 3, 21, "A");
  const MultipartiteState psi3 = purify(q3, "P");
  CHECK(psi3.dims.back().dim == 3);
  const auto spec_in = herm_eig(q3.matrix).values;
  const auto spec_out = herm_eig(partial_trace(psi3, {"P"}).matrix).values;
  CHECK((spec_in - spec_out).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("partial_transpose") {
  const MultipartiteState phi = test::phi_plus();
  const MultipartiteState gamma = partial_transpose(phi, {"B"});
  auto vals = herm_eig(gamma.matrix).values;
  CHECK(vals.minCoeff() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(vals.maxCoeff() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(trace_norm(gamma.matrix) == doctest::Approx(2.0).epsilon(1e-12));

  const MultipartiteState prod =
      tensor_product(random_density(2, 2, 3, "A"), random_density(3, 3, 4, "B"));
  CHECK(herm_eig(partial_transpose(prod, {"B"}).matrix).values.minCoeff() > -1e-10);

  // Involution.
  const MultipartiteState rho = test::random_bipartite(2, 3, 4, 77);
  const MultipartiteState twice = partial_transpose(partial_transpose(rho, {"B"}), {"B"});
  CHECK((twice.matrix - rho.matrix).norm() < 1e-12);

  MultipartiteState pure = maximally_entangled(2);
  CHECK_THROWS_AS(partial_transpose(pure, {"B"}), std::invalid_argument);
}

TEST_CASE("apply_isometry") {
  const MultipartiteState a = random_density(2, 2, 31, "A");
  const MultipartiteState b = random_density(3, 2, 32, "B");
  const MultipartiteState prod = tensor_product(a, b);

  // Identity leaves the state unchanged.
  Isometry ident{Mat::Identity(6, 6), {{"A", 2}, {"B", 3}}, {{"A", 2}, {"B", 3}}};
  CHECK((apply_isometry(prod, ident).matrix - prod.matrix).norm() < 1e-13);

  // Swap of equal-dim subsystems matches permute_subsystems.
  const MultipartiteState c = random_density(2, 2, 33, "C");
  const MultipartiteState pp = tensor_product(a, c);
  Mat swap = Mat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) swap(j * 2 + i, i * 2 + j) = 1.0;
  Isometry sw{swap, {{"A", 2}, {"C", 2}}, {{"C", 2}, {"A", 2}}};
  const MultipartiteState swapped = apply_isometry(pp, sw);
  const MultipartiteState permuted = permute_subsystems(pp, {"C", "A"});
  CHECK((swapped.matrix - permuted.matrix).norm() < 1e-13);

  // Trace and spectrum preserved under a unitary on one factor.
  const Mat u = haar_unitary(3, 5);
  Isometry iso{u, {{"B", 3}}, {{"B", 3}}};
  const MultipartiteState rotated = apply_isometry(prod, iso);
  CHECK(std::abs(rotated.matrix.trace() - cxd(1.0, 0.0)) < 1e-12);
  const auto s0 = herm_eig(prod.matrix).values;
  const auto s1 = herm_eig(rotated.matrix).values;
  CHECK((s0 - s1).cwiseAbs().maxCoeff() < 1e-11);

  // Proper isometry into a larger space preserves trace.
  const Mat v = haar_isometry_matrix(2, 5, 6);
  Isometry grow{v, {{"A", 2}}, {{"A", 5}}};
  CHECK(std::abs(apply_isometry(prod, grow).matrix.trace() - cxd(1.0, 0.0)) < 1e-12);

  Isometry bad{Mat::Identity(4, 4), {{"A", 4}}, {{"A", 4}}};
  CHECK_THROWS_AS(apply_isometry(prod, bad), std::invalid_argument);
}

TEST_CASE("tensor ops agree with brute-force oracles") {
  // apply_isometry vs the explicitly assembled operator 1 (x) V (x) 1.
  for (int k = 0; k < 8; ++k) {
    const MultipartiteState rho = random_density(
        std::vector<LabeledDim>{{"A", 2}, {"B", 3}, {"C", 2}}, 4, derive_seed(7100, k));
    const Mat v = haar_isometry_matrix(3, 4, derive_seed(7101, k));
    const Isometry iso{v, {{"B", 3}}, {{"B", 4}}};
    const MultipartiteState fast = apply_isometry(rho, iso);
    const Mat full = kron(kron(Mat::Identity(2, 2), v), Mat::Identity(2, 2));
    const Mat slow = full * rho.matrix * full.adjoint();
    CHECK((fast.matrix - slow).cwiseAbs().maxCoeff() < 1e-13);
  }

  // Density-path and pure-path partial traces are independent routes.
  for (int k = 0; k < 8; ++k) {
    MultipartiteState psi;
    Rng rng(derive_seed(7200, k));
    Vec v(12);
    for (int i = 0; i < 12; ++i) v[i] = rng.complex_gaussian();
    v /= v.norm();
    psi = MultipartiteState{v, {{"A", 2}, {"B", 3}, {"C", 2}}, StateKind::pure_vector};
    for (const auto& keep :
         std::vector<std::vector<std::string>>{{"A"}, {"B"}, {"A", "C"}, {"B", "C"}}) {
      const MultipartiteState via_pure = partial_trace(psi, keep);
      const MultipartiteState via_dense = partial_trace(densify(psi), keep);
      CHECK((via_pure.matrix - via_dense.matrix).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  // Partial transpose of everything is the plain transpose; on a product
  // state it transposes the flipped factor only.
  const MultipartiteState rho = test::random_bipartite(2, 3, 4, 7300);
  const MultipartiteState all = partial_transpose(rho, {"A", "B"});
  CHECK((all.matrix - rho.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  const MultipartiteState a = random_density(2, 2, 7301, "A");
  const MultipartiteState b = random_density(3, 3, 7302, "B");
  const MultipartiteState prod = tensor_product(a, b);
  const MultipartiteState ptb = partial_transpose(prod, {"B"});
  CHECK((ptb.matrix - kron(a.matrix, b.matrix.transpose())).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("trace norm and distance") {
  const MultipartiteState rho = test::random_bipartite(2, 2, 4, 55);
  CHECK(trace_norm(rho.matrix) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(rho.matrix, rho.matrix) == doctest::Approx(0.0));

  // Triangle inequality on random triples.
  for (int k = 0; k < 20; ++k) {
    const Mat x = test::random_bipartite(2, 2, 4, 200 + 3 * k).matrix;
    const Mat y = test::random_bipartite(2, 2, 4, 201 + 3 * k).matrix;
    const Mat z = test::random_bipartite(2, 2, 4, 202 + 3 * k).matrix;
    CHECK(trace_distance(x, z) <= trace_distance(x, y) + trace_distance(y, z) + 1e-10);
    CHECK(trace_distance(x, y) <= 1.0 + 1e-12);
  }
}

TEST_CASE("haar sampling determinism and properties") {
  const Mat u = haar_unitary(4, 99);
  CHECK((u * u.adjoint() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  const Mat u2 = haar_unitary(4, 99);
  CHECK((u - u2).cwiseAbs().maxCoeff() == 0.0);  // bit-exact reproducibility

  const Mat v = haar_isometry_matrix(3, 7, 17);
  CHECK((v.adjoint() * v - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  const MultipartiteState rho = random_density(5, 2, 3, "A");
  CHECK(numerical_rank(herm_eig(rho.matrix).values, defaults::rank_cutoff) == 2);
  CHECK(std::abs(rho.matrix.trace() - cxd(1.0, 0.0)) < 1e-12);

  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("permute and split/merge bookkeeping") {
  const MultipartiteState rho = test::random_bipartite(2, 3, 3, 500);
  const MultipartiteState back =
      permute_subsystems(permute_subsystems(rho, {"B", "A"}), {"A", "B"});
  CHECK((back.matrix - rho.matrix).norm() == 0.0);

  const MultipartiteState wide = random_density(std::vector<LabeledDim>{{"A", 4}}, 3, 7);
  const MultipartiteState split = split_label(wide, "A", 2, 2, "A1", "A2");
  CHECK(split.dims.size() == 2);
  const MultipartiteState merged = merge_labels(split, {"A1", "A2"}, "A");
  CHECK((merged.matrix - wide.matrix).norm() == 0.0);
}

TEST_CASE("error paths") {
  // purify rejects inputs that are not positive semidefinite.
  Mat ind = Mat::Zero(2, 2);
  ind(0, 0) = 1.5;
  ind(1, 1) = -0.5;
  MultipartiteState indef{ind, {{"A", 2}}, StateKind::density};
  CHECK_THROWS_AS(purify(indef, "P"), std::invalid_argument);

  // Purifier label must be fresh.
  const MultipartiteState rho = random_density(2, 2, 1, "A");
  CHECK_THROWS_AS(purify(rho, "A"), std::invalid_argument);

  CHECK_THROWS_AS(haar_isometry_matrix(5, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(haar_unitary(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_density(4, 5, 1, "A"), std::invalid_argument);

  // Isometry output labels must not collide with remaining subsystems.
  const MultipartiteState two =
      tensor_product(random_density(2, 2, 2, "A"), random_density(2, 2, 3, "B"));
  Isometry clash{Mat::Identity(2, 2), {{"A", 2}}, {{"B", 2}}};
  CHECK_THROWS_AS(apply_isometry(two, clash), std::invalid_argument);

  // Isometry validation catches non-isometric matrices.
  Isometry skew{2.0 * Mat::Identity(2, 2), {{"A", 2}}, {{"A", 2}}};
  CHECK_THROWS_WITH_AS(validate_isometry(skew), doctest::Contains("V^+V"),
                       std::invalid_argument);
}

TEST_CASE("state validation names the failed invariant") {
  MultipartiteState s;
  s.dims = {{"A", 2}, {"B", 2}};
  s.kind = StateKind::density;
  s.matrix = Mat::Identity(4, 4);  // trace 4
  CHECK_THROWS_WITH_AS(validate_state(s), doctest::Contains("unit-trace"),
                       std::invalid_argument);

  s.matrix = 0.25 * Mat::Identity(4, 4);
  s.matrix(0, 1) = cxd(0.3, 0.0);  // not hermitian
  CHECK_THROWS_WITH_AS(validate_state(s), doctest::Contains("hermiticity"),
                       std::invalid_argument);

  s.matrix = Mat::Zero(4, 4);
  s.matrix(0, 0) = 1.5;
  s.matrix(1, 1) = -0.5;
  CHECK_THROWS_WITH_AS(validate_state(s), doctest::Contains("positivity"),
                       std::invalid_argument);

  s.dims = {{"A", 2}, {"A", 2}};
  s.matrix = 0.25 * Mat::Identity(4, 4);
  CHECK_THROWS_WITH_AS(validate_state(s), doctest::Contains("label-uniqueness"),
                       std::invalid_argument);

  MultipartiteState unnorm;
  unnorm.dims = {{"A", 2}};
  unnorm.kind = StateKind::pure_vector;
  unnorm.matrix = 2.0 * Vec::Unit(2, 0);
  CHECK_THROWS_WITH_AS(validate_state(unnorm), doctest::Contains("unit-norm"),
                       std::invalid_argument);
}
