#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmi/classical.hpp"
#include "qmi/conjectures.hpp"
#include "qmi/entropy.hpp"

using namespace qmi;

namespace {

JointDistribution uniform_bit_pair_correlated() {
  JointDistribution d;
  d.alphabets = {{"X", 2}, {"Y", 2}};
  d.probs = {0.5, 0.0, 0.0, 0.5};
  return d;
}

JointDistribution independent_bits() {
  JointDistribution d;
  d.alphabets = {{"X", 2}, {"Y", 2}};
  d.probs = {0.25, 0.25, 0.25, 0.25};
  return d;
}

// X = Y uniform on {0..3}, Z = low bit of X.
JointDistribution quad_with_low_bit_reference() {
  JointDistribution d;
  d.alphabets = {{"X", 4}, {"Y", 4}, {"Z", 2}};
  d.probs.assign(32, 0.0);
  for (int x = 0; x < 4; ++x) d.probs[(x * 4 + x) * 2 + (x % 2)] = 0.25;
  return d;
}

}  // namespace

TEST_CASE("shannon entropies") {
  JointDistribution bit;
  bit.alphabets = {{"X", 2}};
  bit.probs = {0.5, 0.5};
  CHECK(shannon_entropy(bit, {"X"}) == doctest::Approx(1.0).epsilon(1e-14));

  JointDistribution det;
  det.alphabets = {{"X", 3}};
  det.probs = {1.0, 0.0, 0.0};
  CHECK(shannon_entropy(det, {"X"}) == doctest::Approx(0.0));

  // Doubled variable: H(XX') = H(X).
  const JointDistribution xx = uniform_bit_pair_correlated();
  CHECK(shannon_entropy(xx, {"X", "Y"}) == doctest::Approx(shannon_entropy(xx, {"X"})));

  CHECK(classical_mi(xx, {"X"}, {"Y"}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(classical_mi(independent_bits(), {"X"}, {"Y"}) == doctest::Approx(0.0));
  const JointDistribution q = quad_with_low_bit_reference();
  CHECK(classical_cmi(q, {"X"}, {"Y"}, {"Z"}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distributed rate sum when the reference knows everything") {
  CHECK(slepian_wolf_sum(uniform_bit_pair_correlated()) == doctest::Approx(1.0));
  CHECK(slepian_wolf_sum(independent_bits()) == doctest::Approx(2.0));
  for (double p : {0.5, 0.75, 0.9}) {
    CHECK(slepian_wolf_sum(make_corr_anticorr(p)) ==
          doctest::Approx(1.0 + binary_entropy(p)).epsilon(1e-12));
  }
}

TEST_CASE("redundant decomposition") {
  // Z = XY: nothing is redundant, one class per support point.
  JointDistribution full;
  full.alphabets = {{"X", 2}, {"Y", 2}, {"Z", 4}};
  full.probs.assign(16, 0.0);
  const double w[4] = {0.4, 0.3, 0.2, 0.1};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) full.probs[(x * 2 + y) * 4 + (x * 2 + y)] = w[x * 2 + y];
  const RedundantDecomposition d1 = ki_decompose(full);
  CHECK(d1.reconstruction_error <= 1e-9);
  CHECK(d1.blocks.size() == 4);
  for (const auto& b : d1.blocks) CHECK(b.members.size() == 1);  // K trivial
  CHECK(d1.h_lj == doctest::Approx(shannon_entropy(full, {"X", "Y"})).epsilon(1e-12));

  // XY independent of Z entirely: everything is redundant.
  JointDistribution indep;
  indep.alphabets = {{"X", 2}, {"Y", 2}, {"Z", 2}};
  indep.probs.assign(8, 0.125);
  const RedundantDecomposition d2 = ki_decompose(indep);
  CHECK(d2.blocks.size() == 1);
  CHECK(d2.h_lj == doctest::Approx(0.0));
  CHECK(d2.reconstruction_error <= 1e-9);

  // Correlated/anti-correlated pair: the class label is the parity bit and
  // the removable part is one uniform bit.
  for (double p : {0.5, 0.75, 0.9}) {
    const RedundantDecomposition d3 = ki_decompose(make_corr_anticorr(p));
    CHECK(d3.blocks.size() == 2);
    CHECK(d3.blocks[0].members.size() == 2);
    for (const auto& b : d3.blocks)
      for (double pk : b.p_k) CHECK(pk == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d3.h_lj == doctest::Approx(binary_entropy(p)).epsilon(1e-9));
    CHECK(d3.reconstruction_error <= 1e-9);
  }

  // Refinement idempotence: the (L,J)-marginalized distribution has no
  // further redundancy.
  const JointDistribution ca = make_corr_anticorr(0.75);
  const RedundantDecomposition d4 = ki_decompose(ca);
  JointDistribution lj;
  lj.alphabets = {{"L", static_cast<int>(d4.blocks.size())}, {"Z", 2}};
  lj.probs.assign(lj.total_size(), 0.0);
  const JointDistribution zmarg = marginal(ca, {"Z"});
  for (size_t zi = 0; zi < d4.q_l_given_z.size(); ++zi)
    for (size_t l = 0; l < d4.blocks.size(); ++l)
      lj.probs[l * 2 + zi] = d4.q_l_given_z[zi][l] * zmarg.probs[zi];
  const RedundantDecomposition d5 = ki_decompose(lj, {"L"});
  CHECK(d5.h_lj == doctest::Approx(d4.h_lj).epsilon(1e-9));
  for (const auto& b : d5.blocks) CHECK(b.members.size() == 1);

  // Optimal rate never exceeds the full rate sum.
  CHECK(optimal_rate_hlj(ca) <= slepian_wolf_sum(ca) + 1e-9);

  // Product block structure: X carries the retained part, Y a z-independent
  // factor; the rate is H(X) and each block spans one X row.
  JointDistribution blockp;
  blockp.alphabets = {{"X", 2}, {"Y", 2}, {"Z", 2}};
  blockp.probs.assign(8, 0.0);
  const double px[2] = {0.3, 0.7};
  const double mk[2] = {0.6, 0.4};
  const double pz_given_x[2][2] = {{0.9, 0.1}, {0.2, 0.8}};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        blockp.probs[x * 4 + y * 2 + z] = px[x] * mk[y] * pz_given_x[x][z];
  const RedundantDecomposition db = ki_decompose(blockp);
  CHECK(db.blocks.size() == 2);
  for (const auto& b : db.blocks) {
    CHECK(b.members.size() == 2);
    CHECK(b.p_k[0] == doctest::Approx(0.6).epsilon(1e-12));
  }
  CHECK(db.h_lj == doctest::Approx(binary_entropy(0.3)).epsilon(1e-9));
  CHECK(db.reconstruction_error <= 1e-9);
}

TEST_CASE("classical independence rate") {
  // Constant functions extract nothing.
  const JointDistribution q = quad_with_low_bit_reference();
  StochasticTable const_f(4, {1.0});
  const ClassicalMindepResult r0 = classical_mindep_rate(q, const_f, const_f);
  CHECK(r0.rate == doctest::Approx(0.0));

  // Hashing by the same function: keep the high bit, drop the bit Z knows.
  StochasticTable high_bit(4, std::vector<double>(2, 0.0));
  for (int x = 0; x < 4; ++x) high_bit[x][x / 2] = 1.0;
  const ClassicalMindepResult r1 = classical_mindep_rate(q, high_bit, high_bit);
  CHECK(r1.feasible);
  CHECK(r1.rate == doctest::Approx(1.0).epsilon(1e-9));  // H(X|Z) = 1
  CHECK(r1.protocol_bound == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r1.rate <= classical_mi(q, {"X"}, {"Y"}) + 1e-9);

  // Leaking functions are caught by the residual gate.
  StochasticTable ident(4, std::vector<double>(4, 0.0));
  for (int x = 0; x < 4; ++x) ident[x][x] = 1.0;
  const ClassicalMindepResult r2 = classical_mindep_rate(q, ident, ident);
  CHECK_FALSE(r2.feasible);
  CHECK(r2.rate == 0.0);
  CHECK(r2.residual > 0.5);
}

TEST_CASE("local-reference family: classical and quantum routes agree") {
  // Diagonal four-party state: a correlated pair with two noisy local reads.
  // The classical marginals must reproduce the density-matrix entropies, and
  // the protocol bound I(F:G) - I(F:Z) - I(G:Z) must match hand arithmetic.
  const double p = 0.7;
  const double hit = (1.0 - p) / 2.0 + p;  // P(read = bit)
  JointDistribution d;
  d.alphabets = {{"X", 2}, {"Y", 2}, {"Z1", 2}, {"Z2", 2}};
  d.probs.assign(16, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int e1 = 0; e1 < 2; ++e1)
      for (int e2 = 0; e2 < 2; ++e2)
        d.probs[i * 8 + i * 4 + e1 * 2 + e2] =
            0.5 * (e1 == i ? hit : 1.0 - hit) * (e2 == i ? hit : 1.0 - hit);
  validate_distribution(d);

  // The same distribution is the diagonal of the four-party density operator
  // built by the harness module (independent construction route).
  {
    Eigen::MatrixXd pm = Eigen::MatrixXd::Zero(2, 2);
    pm(0, 0) = pm(1, 1) = 0.5;
    const MultipartiteState eve = build_local_eve_state(pm, p, 2);
    for (long i = 0; i < 16; ++i)
      CHECK(std::abs(std::real(eve.matrix(i, i)) - d.probs[i]) < 1e-14);
  }

  // Hand values: I(X:Y) = 1; I(X:Z1) = 1 - H2(hit).
  CHECK(classical_mi(d, {"X"}, {"Y"}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(classical_mi(d, {"X"}, {"Z1"}) ==
        doctest::Approx(1.0 - binary_entropy(hit)).epsilon(1e-12));

  // Identity functions leak: the residual gate fires, the protocol bound is
  // I(X:Y) - I(X:Z) - I(Y:Z) with Z the joint reference.
  StochasticTable ident(2, std::vector<double>(2, 0.0));
  ident[0][0] = ident[1][1] = 1.0;
  const ClassicalMindepResult r = classical_mindep_rate(d, ident, ident);
  CHECK_FALSE(r.feasible);
  const double i_xz = classical_mi(d, {"X"}, {"Z1", "Z2"});
  const double i_yz = classical_mi(d, {"Y"}, {"Z1", "Z2"});
  CHECK(r.protocol_bound ==
        doctest::Approx(std::max(0.0, 1.0 - i_xz - i_yz)).epsilon(1e-9));
}

TEST_CASE("privacy amplification simulation" * doctest::timeout(600)) {
  // out_bits = 0: empirically exact independence.
  const JointDistribution ca = make_corr_anticorr(0.75);
  const HashSimResult h0 = hash_sim(ca, 4, 0, 2000, 1);
  CHECK(h0.tv_from_product == doctest::Approx(0.0));

  // Perfectly correlated bits, trivial reference, full-rate hashing.
  JointDistribution cc;
  cc.alphabets = {{"X", 2}, {"Y", 2}, {"Z", 1}};
  cc.probs = {0.5, 0.0, 0.0, 0.5};
  const HashSimResult h1 = hash_sim(cc, 6, 6, 4000, 2);
  CHECK(h1.tv_from_product == doctest::Approx(0.0));
  CHECK(h1.rate == doctest::Approx(1.0));

  CHECK_THROWS_AS(hash_sim(cc, 4, 5, 100, 3), std::invalid_argument);

  // Keyed below H(X|Z), the empirical distance falls with the block length.
  // Z is a sparse noisy read of X with the per-block leak held constant
  // (q = 0.8/n), which isolates the hashing depth and keeps the histogram
  // well-populated; values average a few hash draws to tame the small-n
  // hash-to-hash variance.
  auto noisy_read = [](double q) {
    JointDistribution d;
    d.alphabets = {{"X", 2}, {"Y", 2}, {"Z", 2}};
    d.probs.assign(8, 0.0);
    for (int x = 0; x < 2; ++x) {
      d.probs[x * 4 + x * 2 + 0] += 0.5 * (1.0 - q);
      d.probs[x * 4 + x * 2 + x] += 0.5 * q;
    }
    return d;
  };
  double prev = 1.0;
  for (const int n : {8, 12, 16}) {
    const JointDistribution d = noisy_read(0.8 / n);
    const double h_x_given_z =
        shannon_entropy(d, {"X", "Z"}) - shannon_entropy(d, {"Z"});
    CHECK(5.0 / n < h_x_given_z - 0.1);  // rate below H(X|Z) - margin
    double mean_tv = 0.0;
    for (int seed = 1; seed <= 4; ++seed)
      mean_tv += hash_sim(d, n, 5, 200000, seed).tv_from_product;
    mean_tv /= 4.0;
    CHECK(mean_tv < prev);
    prev = mean_tv;
  }
}
