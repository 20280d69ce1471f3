#include "qmi/corpus.hpp"

#include <cmath>
#include <sstream>

#include "qmi/compression.hpp"
#include "qmi/conjectures.hpp"
#include "qmi/defaults.hpp"
#include "qmi/entropy.hpp"
#include "qmi/linalg.hpp"
#include "qmi/measures.hpp"
#include "qmi/mindep.hpp"
#include "qmi/rng.hpp"
#include "qmi/tensor.hpp"

namespace qmi {

namespace {

MultipartiteState maxcorr_bell_mixture(double eps) {
  // (1-eps) Phi+ + eps Phi-.
  Vec plus = Vec::Zero(4), minus = Vec::Zero(4);
  plus[0] = plus[3] = 1.0 / std::sqrt(2.0);
  minus[0] = 1.0 / std::sqrt(2.0);
  minus[3] = -1.0 / std::sqrt(2.0);
  MultipartiteState s;
  s.dims = {{"A", 2}, {"B", 2}};
  s.kind = StateKind::density;
  s.matrix = (1.0 - eps) * (plus * plus.adjoint()) + eps * (minus * minus.adjoint());
  return s;
}

}  // namespace

std::vector<CorpusEntry> shipped_corpus() {
  std::vector<CorpusEntry> out;

  CorpusEntry phi;
  phi.name = "phi_plus";
  phi.state = densify(maximally_entangled(2));
  out.push_back(phi);

  CorpusEntry pbit;
  pbit.name = "pbit_d2";
  pbit.state = make_pbit(haar_unitary(4, 11));
  out.push_back(pbit);

  CorpusEntry pdit;
  pdit.name = "pdit_d3";
  pdit.state = make_pdit(3, haar_unitary(6, 12));
  out.push_back(pdit);

  CorpusEntry mc;
  mc.name = "maxcorr_eps025";
  mc.state = maxcorr_bell_mixture(0.25);
  out.push_back(mc);

  CorpusEntry iso;
  iso.name = "iso_F09_d2";
  iso.state = isotropic_state({0.9, 2});
  out.push_back(iso);

  CorpusEntry ca;
  ca.name = "corr_anticorr_p075";
  ca.is_distribution = true;
  ca.dist = make_corr_anticorr(0.75);
  out.push_back(ca);

  CorpusEntry le;
  le.name = "local_eve";
  Eigen::MatrixXd pm = Eigen::MatrixXd::Zero(2, 2);
  pm(0, 0) = 0.5;
  pm(1, 1) = 0.5;
  le.state = build_local_eve_state(pm, 0.7, 2);
  out.push_back(le);

  return out;
}

namespace {

void check(std::vector<SelftestLine>& lines, const std::string& name, bool ok,
           const std::string& detail) {
  lines.push_back({name, ok, detail});
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::vector<SelftestLine> run_selftest() {
  std::vector<SelftestLine> lines;
  const auto corpus = shipped_corpus();
  auto find = [&](const std::string& n) -> const CorpusEntry& {
    for (const auto& e : corpus)
      if (e.name == n) return e;
    throw std::logic_error("corpus entry missing: " + n);
  };

  {
    const auto& s = find("phi_plus").state;
    const double sa = entropy_of(s, {"A"});
    const double mi = mutual_info(s, {"A"}, {"B"});
    const double en = log_negativity(s, Cut{{"A"}});
    check(lines, "phi_plus: S(A)=1", std::abs(sa - 1.0) <= 1e-9, "S(A)=" + num(sa));
    check(lines, "phi_plus: I(A:B)=2", std::abs(mi - 2.0) <= 1e-9, "I=" + num(mi));
    check(lines, "phi_plus: E_N=1", std::abs(en - 1.0) <= 1e-9, "E_N=" + num(en));
    const ExactMiReport ex = check_exact_mi(s, {"A", "B"});
    check(lines, "phi_plus: exact independence with unit value",
          ex.is_exact && std::abs(ex.mi_half - 1.0) <= 1e-9,
          "mi_half=" + num(ex.mi_half) + " residual=" + num(ex.residual));
  }

  for (const std::string name : {"pbit_d2", "pdit_d3"}) {
    const auto& s = find(name).state;
    const double floor_value = name == "pbit_d2" ? 0.5 : 0.5 * std::log2(3.0);
    const ExactMiReport ex = check_exact_mi(s, {"A", "B"});
    check(lines, name + ": exact independence", ex.is_exact, "residual=" + num(ex.residual));
    check(lines, name + ": mi_half at least the key value",
          ex.mi_half >= floor_value - 1e-9, "mi_half=" + num(ex.mi_half));
    const TwistingExtraction tw = extract_twisting(s, {"A", "B"});
    check(lines, name + ": twisting reconstruction",
          tw.reconstruction_error <= defaults::twist_reconstruction_tol,
          "error=" + num(tw.reconstruction_error));
    const MultipartiteState split =
        permute_subsystems(s, {"A'", "A", "B'", "B"});
    SplitLabels sl{"A'", "A", "B'", "B"};
    const RateSumIdentity id = rate_sum_identity_check(split, sl);
    check(lines, name + ": rate-sum identity gap", id.gap <= 1e-8, "gap=" + num(id.gap));
  }

  {
    const auto& s = find("maxcorr_eps025").state;
    const MaxcorrBound mb = maxcorr_hashing_bound(s);
    const double expected = 0.5 * (1.0 - binary_entropy(0.25));
    check(lines, "maxcorr_eps025: hashing bound",
          std::abs(mb.bound - expected) <= 1e-9, "bound=" + num(mb.bound));
    check(lines, "maxcorr_eps025: ccq audit equals coherent information",
          std::abs(mb.ccq_audit - mb.coherent_information) <= 1e-9,
          "audit=" + num(mb.ccq_audit));
  }

  {
    const auto& s = find("iso_F09_d2").state;
    const double en = log_negativity(s, Cut{{"A"}});
    check(lines, "iso_F09_d2: E_N = log2(0.9*2)",
          std::abs(en - std::log2(1.8)) <= 1e-9, "E_N=" + num(en));
    const double f = entangled_fraction(s);
    check(lines, "iso_F09_d2: fidelity 0.9", std::abs(f - 0.9) <= 1e-12, "F=" + num(f));
  }

  {
    const auto& d = find("corr_anticorr_p075").dist;
    const double sw = slepian_wolf_sum(d);
    const double expected_sw = 1.0 + binary_entropy(0.75);
    check(lines, "corr_anticorr_p075: H(XY) = 1 + H2(0.75)",
          std::abs(sw - expected_sw) <= 1e-9, "H(XY)=" + num(sw));
    const RedundantDecomposition kd = ki_decompose(d);
    check(lines, "corr_anticorr_p075: decomposition reconstructs",
          kd.reconstruction_error <= 1e-9, "error=" + num(kd.reconstruction_error));
    check(lines, "corr_anticorr_p075: H(LJ) = H2(0.75)",
          std::abs(kd.h_lj - binary_entropy(0.75)) <= 1e-9, "H(LJ)=" + num(kd.h_lj));
  }

  {
    const auto& s = find("local_eve").state;
    const MultipartiteState ab = partial_trace(s, {"A", "B"});
    check(lines, "local_eve: AB marginal maximally correlated",
          is_maximally_correlated(ab), "");
    // Quantum and classical routes to I(AB:E1 E2) agree on this diagonal state.
    const double q = mutual_info(s, {"A", "B"}, {"E1", "E2"});
    JointDistribution cl;
    cl.alphabets = {{"X", 2}, {"Y", 2}, {"Z1", 2}, {"Z2", 2}};
    cl.probs.assign(16, 0.0);
    for (long i = 0; i < 16; ++i) cl.probs[i] = std::real(s.matrix(i, i));
    const double c = classical_mi(cl, {"X", "Y"}, {"Z1", "Z2"});
    check(lines, "local_eve: quantum/classical mutual information agreement",
          std::abs(q - c) <= 1e-9, "q=" + num(q) + " c=" + num(c));
  }

  return lines;
}

}  // namespace qmi
