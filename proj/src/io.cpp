#include "qmi/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qmi {

Json matrix_to_json(const Mat& m) {
  Json arr = Json::array();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c)
      arr.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  return arr;
}

Mat matrix_from_json(const Json& j, long rows, long cols) {
  if (!j.is_array() || static_cast<long>(j.size()) != rows * cols)
    throw std::invalid_argument("matrix field has wrong length (expected " +
                                std::to_string(rows * cols) + " [re,im] pairs)");
  Mat m(rows, cols);
  long k = 0;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("matrix entries must be [re,im] pairs");
    m(k / cols, k % cols) = cxd(e[0].get<double>(), e[1].get<double>());
    ++k;
  }
  return m;
}

Json state_to_json(const MultipartiteState& s) {
  Json j;
  Json dims = Json::array();
  for (const auto& d : s.dims) dims.push_back({{"label", d.label}, {"dim", d.dim}});
  j["dims"] = dims;
  j["kind"] = s.kind == StateKind::density ? "density" : "pure-vector";
  j["matrix"] = matrix_to_json(s.matrix);
  return j;
}

MultipartiteState state_from_json(const Json& j) {
  if (!j.contains("dims") || !j.contains("kind") || !j.contains("matrix"))
    throw std::invalid_argument("state file must carry dims, kind and matrix fields");
  MultipartiteState s;
  for (const auto& d : j.at("dims"))
    s.dims.push_back({d.at("label").get<std::string>(), d.at("dim").get<int>()});
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "density")
    s.kind = StateKind::density;
  else if (kind == "pure-vector")
    s.kind = StateKind::pure_vector;
  else
    throw std::invalid_argument("state invariant violated: kind (got '" + kind + "')");
  const long n = s.total_dim();
  const long cols = s.kind == StateKind::density ? n : 1;
  if (!j.at("matrix").is_array() || static_cast<long>(j.at("matrix").size()) != n * cols)
    throw std::invalid_argument(
        "state invariant violated: dims-product (matrix field has " +
        std::to_string(j.at("matrix").size()) + " entries, dims require " +
        std::to_string(n * cols) + ")");
  s.matrix = matrix_from_json(j.at("matrix"), n, cols);
  validate_state(s);
  return s;
}

Json distribution_to_json(const JointDistribution& p) {
  Json j;
  Json alpha = Json::array();
  for (const auto& a : p.alphabets) alpha.push_back({{"label", a.label}, {"size", a.size}});
  j["alphabets"] = alpha;
  j["probs"] = p.probs;
  return j;
}

JointDistribution distribution_from_json(const Json& j) {
  if (!j.contains("alphabets") || !j.contains("probs"))
    throw std::invalid_argument("distribution file must carry alphabets and probs fields");
  JointDistribution p;
  for (const auto& a : j.at("alphabets"))
    p.alphabets.push_back({a.at("label").get<std::string>(), a.at("size").get<int>()});
  p.probs = j.at("probs").get<std::vector<double>>();
  validate_distribution(p);
  return p;
}

Json entropic_report_to_json(const EntropicReport& r) {
  Json j = Json::object();
  for (const auto& [k, v] : r) j[k] = v;
  return j;
}

EntropicReport entropic_report_from_json(const Json& j) {
  EntropicReport r;
  for (auto it = j.begin(); it != j.end(); ++it) r.emplace_back(it.key(), it.value().get<double>());
  return r;
}

Json measure_result_to_json(const MeasureResult& r) {
  Json j;
  j["value"] = r.value;
  j["method"] = r.method;
  if (r.certificate) {
    Json c;
    c["iterations"] = r.certificate->iterations;
    c["restarts"] = r.certificate->restarts;
    c["residual"] = r.certificate->residual;
    c["restart_spread"] = r.certificate->restart_spread;
    c["converged"] = r.certificate->converged;
    if (r.certificate->sigma_star.size() > 0)
      c["sigma_star"] = matrix_to_json(r.certificate->sigma_star);
    j["certificate"] = c;
  }
  return j;
}

MeasureResult measure_result_from_json(const Json& j) {
  MeasureResult r;
  r.value = j.at("value").get<double>();
  r.method = j.at("method").get<std::string>();
  if (j.contains("certificate")) {
    const Json& c = j.at("certificate");
    OptimizerCertificate cert;
    cert.iterations = c.at("iterations").get<int>();
    cert.restarts = c.at("restarts").get<int>();
    cert.residual = c.at("residual").get<double>();
    cert.restart_spread = c.at("restart_spread").get<double>();
    cert.converged = c.at("converged").get<bool>();
    if (c.contains("sigma_star")) {
      const long n = static_cast<long>(std::llround(std::sqrt(double(c.at("sigma_star").size()))));
      cert.sigma_star = matrix_from_json(c.at("sigma_star"), n, n);
    }
    r.certificate = cert;
  }
  return r;
}

Json independence_report_to_json(const IndependenceReport& r) {
  Json j;
  j["lower_bound"] = r.lower_bound;
  j["lower_method"] = r.lower_method;
  j["residual_independence"] = r.residual_independence;
  j["mi_half"] = r.mi_half;
  j["upper_esq"] = r.upper_esq;
  if (r.upper_er_ppt >= 0.0) {
    j["upper_er_ppt"] = r.upper_er_ppt;
    j["upper_er_ppt_flag"] =
        "valid only under the no-locking conjecture (product marginals cannot lock negativity)";
  }
  return j;
}

IndependenceReport independence_report_from_json(const Json& j) {
  IndependenceReport r;
  r.lower_bound = j.at("lower_bound").get<double>();
  r.lower_method = j.at("lower_method").get<std::string>();
  r.residual_independence = j.at("residual_independence").get<double>();
  r.mi_half = j.at("mi_half").get<double>();
  r.upper_esq = j.at("upper_esq").get<double>();
  if (j.contains("upper_er_ppt")) r.upper_er_ppt = j.at("upper_er_ppt").get<double>();
  return r;
}

Json exact_mi_report_to_json(const ExactMiReport& r) {
  return Json{{"is_exact", r.is_exact},
              {"residual", r.residual},
              {"mutual_information", r.mutual_information},
              {"mi_half", r.mi_half}};
}

ExactMiReport exact_mi_report_from_json(const Json& j) {
  ExactMiReport r;
  r.is_exact = j.at("is_exact").get<bool>();
  r.residual = j.at("residual").get<double>();
  r.mutual_information = j.at("mutual_information").get<double>();
  r.mi_half = j.at("mi_half").get<double>();
  return r;
}

Json rate_point_to_json(const RatePoint& p) {
  return Json{{"R_A", p.r_a}, {"R_B", p.r_b}, {"formula", p.formula},
              {"assumptions", p.assumptions}};
}

RatePoint rate_point_from_json(const Json& j) {
  return RatePoint{j.at("R_A").get<double>(), j.at("R_B").get<double>(),
                   j.at("formula").get<std::string>(), j.at("assumptions").get<std::string>()};
}

Json converse_bounds_to_json(const ConverseBounds& b) {
  return Json{{"R_A_min", b.r_a_min}, {"R_B_min", b.r_b_min}, {"sum_min", b.sum_min}};
}

ConverseBounds converse_bounds_from_json(const Json& j) {
  return ConverseBounds{j.at("R_A_min").get<double>(), j.at("R_B_min").get<double>(),
                        j.at("sum_min").get<double>()};
}

Json split_to_json(const SubsystemSplit& s) {
  Json j;
  j["U_A"] = matrix_to_json(s.u_a);
  j["U_B"] = matrix_to_json(s.u_b);
  j["dims"] = {{"d_alpha", s.dims.d_alpha},
               {"d_a", s.dims.d_a},
               {"d_beta", s.dims.d_beta},
               {"d_b", s.dims.d_b}};
  return j;
}

SubsystemSplit split_from_json(const Json& j) {
  SubsystemSplit s;
  s.dims.d_alpha = j.at("dims").at("d_alpha").get<int>();
  s.dims.d_a = j.at("dims").at("d_a").get<int>();
  s.dims.d_beta = j.at("dims").at("d_beta").get<int>();
  s.dims.d_b = j.at("dims").at("d_b").get<int>();
  const long da = static_cast<long>(s.dims.d_alpha) * s.dims.d_a;
  const long db = static_cast<long>(s.dims.d_beta) * s.dims.d_b;
  s.u_a = matrix_from_json(j.at("U_A"), da, da);
  s.u_b = matrix_from_json(j.at("U_B"), db, db);
  const double ua_err = (s.u_a.adjoint() * s.u_a - Mat::Identity(da, da)).cwiseAbs().maxCoeff();
  const double ub_err = (s.u_b.adjoint() * s.u_b - Mat::Identity(db, db)).cwiseAbs().maxCoeff();
  if (ua_err > 1e-10 || ub_err > 1e-10)
    throw std::invalid_argument("split invariant violated: unitarity (max |U^+U - 1| = " +
                                std::to_string(std::max(ua_err, ub_err)) + ")");
  return s;
}

Json trial_record_to_json(const TrialRecord& r) {
  Json j;
  j["seed"] = r.seed;
  j["index"] = r.index;
  j["dims"] = {{"X", r.params.dim_x},
               {"A", r.params.dim_a},
               {"B", r.params.dim_b},
               {"G", r.params.dim_g}};
  j["ranks"] = {{"A", r.params.rank_a}, {"B", r.params.rank_b}};
  j["log_negativity"] = r.log_neg;
  j["slack"] = r.slack;
  j["optimized"] = r.optimized;
  j["evaluations"] = r.evaluations;
  j["marginal_residual"] = r.marginal_residual;
  return j;
}

TrialRecord trial_record_from_json(const Json& j) {
  TrialRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.index = j.at("index").get<long>();
  r.params.dim_x = j.at("dims").at("X").get<int>();
  r.params.dim_a = j.at("dims").at("A").get<int>();
  r.params.dim_b = j.at("dims").at("B").get<int>();
  r.params.dim_g = j.at("dims").at("G").get<int>();
  r.params.rank_a = j.at("ranks").at("A").get<int>();
  r.params.rank_b = j.at("ranks").at("B").get<int>();
  r.log_neg = j.at("log_negativity").get<double>();
  r.slack = j.at("slack").get<double>();
  r.optimized = j.at("optimized").get<bool>();
  r.evaluations = j.at("evaluations").get<long>();
  r.marginal_residual = j.at("marginal_residual").get<double>();
  return r;
}

Json conj5_summary_to_json(const Conj5Summary& s) {
  Json j;
  j["trials"] = s.trials;
  j["optimized_trials"] = s.optimized_trials;
  j["min_slack"] = s.min_slack;
  j["argmin"] = trial_record_to_json(s.argmin);
  j["histogram"] = {{"lo", s.hist_lo}, {"hi", s.hist_hi}, {"counts", s.histogram}};
  Json v = Json::array();
  for (const auto& r : s.violations) v.push_back(trial_record_to_json(r));
  j["violations"] = v;
  return j;
}

Conj5Summary conj5_summary_from_json(const Json& j) {
  Conj5Summary s;
  s.trials = j.at("trials").get<long>();
  s.optimized_trials = j.at("optimized_trials").get<long>();
  s.min_slack = j.at("min_slack").get<double>();
  s.argmin = trial_record_from_json(j.at("argmin"));
  s.hist_lo = j.at("histogram").at("lo").get<double>();
  s.hist_hi = j.at("histogram").at("hi").get<double>();
  s.histogram = j.at("histogram").at("counts").get<std::vector<long>>();
  for (const auto& v : j.at("violations")) s.violations.push_back(trial_record_from_json(v));
  return s;
}

Json decomposition_to_json(const RedundantDecomposition& d) {
  Json j;
  Json blocks = Json::array();
  for (const auto& b : d.blocks) {
    blocks.push_back(
        {{"l", b.l}, {"members", b.members}, {"p_k", b.p_k}});
  }
  j["blocks"] = blocks;
  Json tau = Json::array();
  for (const auto& [s, ljk] : d.tau)
    tau.push_back({{"xy", s}, {"l", ljk[0]}, {"j", ljk[1]}, {"k", ljk[2]}});
  j["tau"] = tau;
  j["q_l_given_z"] = d.q_l_given_z;
  j["reconstruction_error"] = d.reconstruction_error;
  j["H(LJ)"] = d.h_lj;
  return j;
}

RedundantDecomposition decomposition_from_json(const Json& j) {
  RedundantDecomposition d;
  for (const auto& b : j.at("blocks")) {
    RedundantDecomposition::Block blk;
    blk.l = b.at("l").get<int>();
    blk.members = b.at("members").get<std::vector<long>>();
    blk.p_k = b.at("p_k").get<std::vector<double>>();
    d.blocks.push_back(std::move(blk));
  }
  for (const auto& t : j.at("tau"))
    d.tau[t.at("xy").get<long>()] = {t.at("l").get<int>(), t.at("j").get<int>(),
                                     t.at("k").get<int>()};
  d.q_l_given_z = j.at("q_l_given_z").get<std::vector<std::vector<double>>>();
  d.reconstruction_error = j.at("reconstruction_error").get<double>();
  d.h_lj = j.at("H(LJ)").get<double>();
  return d;
}

Json hash_sim_to_json(const HashSimResult& r) {
  return Json{{"tv_from_product", r.tv_from_product},
              {"std_error", r.std_error},
              {"rate", r.rate},
              {"observed_cells", r.observed_cells}};
}

HashSimResult hash_sim_from_json(const Json& j) {
  HashSimResult r;
  r.tv_from_product = j.at("tv_from_product").get<double>();
  r.std_error = j.at("std_error").get<double>();
  r.rate = j.at("rate").get<double>();
  r.observed_cells = j.at("observed_cells").get<long>();
  return r;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

MultipartiteState load_state(const std::string& path) { return state_from_json(load_json(path)); }
void save_state(const MultipartiteState& s, const std::string& path) {
  save_json(state_to_json(s), path);
}
JointDistribution load_distribution(const std::string& path) {
  return distribution_from_json(load_json(path));
}
void save_distribution(const JointDistribution& p, const std::string& path) {
  save_json(distribution_to_json(p), path);
}

}  // namespace qmi
