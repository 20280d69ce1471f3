// Command-line front end: entropic reports, entanglement measures, mutual
// independence bounds, distributed-compression rates, conjecture harnesses and
// the classical analogue, over JSON state/distribution files.
//
// Exit codes: 0 success, 1 validation error, 2 optimizer non-convergence,
// 3 conjecture violation found.

#include <CLI11.hpp>
#include <fmt/core.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qmi/corpus.hpp"
#include "qmi/defaults.hpp"
#include "qmi/io.hpp"
#include "qmi/linalg.hpp"
#include "qmi/rng.hpp"
#include "qmi/tensor.hpp"

using namespace qmi;

namespace {

struct GlobalOpts {
  std::string format = "table";
  std::string out_path;
  std::uint64_t seed = 0;
  int jobs = 1;
};

Json config_block(const GlobalOpts& g, const Json& extra = Json::object()) {
  Json c;
  c["seed"] = g.seed;
  c["jobs"] = g.jobs;
  c["tolerances"] = {
      {"hermiticity", defaults::herm_tol},
      {"rank_cutoff", defaults::rank_cutoff},
      {"exact_mi_residual", defaults::exact_mi_residual_tol},
      {"twist_reconstruction", defaults::twist_reconstruction_tol},
      {"split_feasibility", defaults::split_feasibility_tol},
      {"er_rel_change", defaults::er_rel_tol},
      {"conj4_residual", defaults::conj4_residual_tol},
      {"conj5_violation", defaults::conj5_violation_tol},
  };
  for (auto it = extra.begin(); it != extra.end(); ++it) c[it.key()] = it.value();
  return c;
}

void emit(const GlobalOpts& g, const Json& config, const Json& result,
          const std::string& table_text) {
  if (g.format == "json") {
    Json j;
    j["config"] = config;
    j["result"] = result;
    const std::string text = j.dump(2) + "\n";
    if (!g.out_path.empty()) {
      std::ofstream out(g.out_path);
      out << text;
    } else {
      std::cout << text;
    }
    return;
  }
  std::string header = "# defaults: exact-mi tol " +
                       fmt::format("{:g}", defaults::exact_mi_residual_tol) +
                       ", split feasibility " +
                       fmt::format("{:g}", defaults::split_feasibility_tol) + ", seed " +
                       std::to_string(config.value("seed", std::uint64_t{0})) + "\n";
  if (!g.out_path.empty()) {
    std::ofstream out(g.out_path);
    out << header << table_text;
  } else {
    std::cout << header << table_text;
  }
}

std::vector<std::string> split_csv_labels(const std::string& arg) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : arg) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_info(const GlobalOpts& g, const std::string& path) {
  const MultipartiteState s = load_state(path);
  const EntropicReport rep = standard_report(s);
  std::string table;
  for (const auto& [k, v] : rep) table += fmt::format("{:<16} {: .12f}\n", k, v);
  emit(g, config_block(g, {{"input", path}}), entropic_report_to_json(rep), table);
  return 0;
}

int cmd_measures(const GlobalOpts& g, const std::string& path, const std::string& cut_arg,
                 bool skip_er, int restarts, int max_iters, int ext_dim, int trials) {
  const MultipartiteState s = load_state(path);
  Cut cut{split_csv_labels(cut_arg.empty() ? s.dims[0].label : cut_arg)};

  Json result;
  std::string table;
  const double en = log_negativity(s, cut);
  result["log_negativity"] = en;
  table += fmt::format("{:<24} {: .12f}\n", "E_N (log-negativity)", en);

  EsqUpperOptions eo;
  eo.seed = g.seed;
  eo.jobs = g.jobs;
  if (ext_dim > 0) eo.ext_dim = ext_dim;
  if (trials > 0) eo.trials = trials;
  const MeasureResult esq = esq_upper(s, cut, eo);
  result["esq_heuristic"] = measure_result_to_json(esq);
  table += fmt::format("{:<24} {: .12f}   ({})\n", "E_sq heuristic", esq.value, esq.method);

  int code = 0;
  if (!skip_er) {
    RelEntPptOptions ro;
    ro.seed = g.seed;
    ro.jobs = g.jobs;
    if (restarts >= 0) ro.restarts = restarts;
    if (max_iters > 0) ro.max_iters = max_iters;
    const MeasureResult er = rel_ent_ppt(s, cut, ro);
    result["er_ppt"] = measure_result_to_json(er);
    table += fmt::format("{:<24} {: .12f}   ({})\n", "E_r-PPT", er.value, er.method);
    if (er.certificate && !er.certificate->converged) code = 2;
  }
  emit(g, config_block(g, {{"input", path}, {"cut", cut.a_side}}), result, table);
  return code;
}

int cmd_mindep(const GlobalOpts& g, const std::string& path, const std::string& keys_arg,
               bool search, bool skip_er, int restarts) {
  const MultipartiteState s = load_state(path);
  MiBoundsOptions opts;
  if (!keys_arg.empty()) opts.key = split_csv_labels(keys_arg);
  opts.run_split_search = search;
  opts.run_er_ppt = !skip_er;
  opts.esq.seed = g.seed;
  opts.esq.jobs = g.jobs;
  opts.split.seed = g.seed;
  opts.split.jobs = g.jobs;
  if (restarts >= 0) {
    opts.split.restarts = restarts;
    opts.er.restarts = restarts;
  }
  opts.er.seed = g.seed;
  opts.er.jobs = g.jobs;
  const IndependenceReport rep = mi_bounds(s, opts);
  std::string table;
  table += fmt::format("{:<26} {: .12f}   ({})\n", "lower bound", rep.lower_bound,
                       rep.lower_method);
  table += fmt::format("{:<26} {: .12f}\n", "residual I(keys:R)", rep.residual_independence);
  table += fmt::format("{:<26} {: .12f}\n", "I/2 at reporting split", rep.mi_half);
  table += fmt::format("{:<26} {: .12f}\n", "upper bound (E_sq heur.)", rep.upper_esq);
  if (rep.upper_er_ppt >= 0.0)
    table += fmt::format("{:<26} {: .12f}   (valid under the no-locking conjecture)\n",
                         "upper bound (E_r-PPT)", rep.upper_er_ppt);
  emit(g, config_block(g, {{"input", path}}), independence_report_to_json(rep), table);
  return 0;
}

int cmd_rates(const GlobalOpts& g, const std::string& path, const std::string& split_path,
              const std::string& split_labels_arg, std::optional<double> iind,
              const std::string& iind_source, const std::string& csv_path) {
  const MultipartiteState s = load_state(path);
  Json result;
  std::string table;
  std::vector<RatePoint> points;

  if (s.dims.size() == 2) {
    points = corner_points(s);
    EsqUpperOptions eo;
    eo.seed = g.seed;
    eo.jobs = g.jobs;
    const double esq = esq_upper(s, Cut{{s.dims[0].label}}, eo).value;
    const ConverseBounds cb = converse_bounds(s, esq);
    result["converse"] = converse_bounds_to_json(cb);
    result["esq_for_converse"] = esq;
    table += fmt::format("converse: R_A >= {:.9f}, R_B >= {:.9f}, sum >= {:.9f}\n",
                         cb.r_a_min, cb.r_b_min, cb.sum_min);
    if (iind) {
      const double sum = rate_sum_theorem(s, *iind);
      result["optimal_rate_sum"] = sum;
      result["iind_value"] = *iind;
      result["iind_source"] = iind_source.empty() ? "caller" : iind_source;
      table += fmt::format("optimal rate sum with I_ind = {:.9f} ({}): {:.9f}\n", *iind,
                           result["iind_source"].get<std::string>(), sum);
      for (const auto& p : conjectural_corner_points(s, *iind)) points.push_back(p);
    }
  }

  if (!split_path.empty()) {
    MultipartiteState split = load_state(split_path);
    SplitLabels sl;
    if (!split_labels_arg.empty()) {
      const auto ls = split_csv_labels(split_labels_arg);
      if (ls.size() != 4)
        throw std::invalid_argument("--split-labels needs four labels: a,alpha,b,beta");
      sl = SplitLabels{ls[0], ls[1], ls[2], ls[3]};
    }
    const RatePoint pt = rate_pair_exact(split, sl);
    points.push_back(pt);
    const RateSumIdentity id = rate_sum_identity_check(split, sl);
    result["rate_sum_identity"] = {{"lhs", id.lhs}, {"rhs", id.rhs}, {"gap", id.gap}};
    table += fmt::format("redistribution pair: R_A = {:.9f}, R_B = {:.9f} (gap {:.3e})\n",
                         pt.r_a, pt.r_b, id.gap);
  }

  Json jpoints = Json::array();
  for (const auto& p : points) {
    jpoints.push_back(rate_point_to_json(p));
    table += fmt::format("point: R_A = {: .9f}, R_B = {: .9f}   {} [{}]\n", p.r_a, p.r_b,
                         p.formula, p.assumptions);
  }
  result["points"] = jpoints;

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "R_A,R_B,formula,assumptions\n";
    for (const auto& p : points)
      csv << fmt::format("{:.12f},{:.12f},\"{}\",\"{}\"\n", p.r_a, p.r_b, p.formula,
                         p.assumptions);
  }
  emit(g, config_block(g, {{"input", path}}), result, table);
  return 0;
}

int cmd_conj5(const GlobalOpts& g, long trials, long optimized, const std::string& dims_arg,
              const std::string& cert_dir, const std::string& csv_path) {
  Conj5Params p;
  if (!dims_arg.empty()) {
    const auto parts = split_csv_labels(dims_arg);
    if (parts.size() < 3)
      throw std::invalid_argument("--dims needs dx,da,db[,dg]");
    p.dim_x = std::stoi(parts[0]);
    p.dim_a = std::stoi(parts[1]);
    p.dim_b = std::stoi(parts[2]);
    if (parts.size() > 3) p.dim_g = std::stoi(parts[3]);
  }
  const Conj5Summary sum = conj5_search(p, trials, g.seed, optimized, g.jobs);
  Json result = conj5_summary_to_json(sum);

  std::string table;
  table += fmt::format("trials {} (+{} optimized), min slack {: .9e}\n", sum.trials,
                       sum.optimized_trials, sum.min_slack);
  table += fmt::format("argmin: seed {} E_N {:.9f}\n", sum.argmin.seed, sum.argmin.log_neg);
  table += fmt::format("violations: {}\n", sum.violations.size());

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "bin_lo,bin_hi,count\n";
    const double w = (sum.hist_hi - sum.hist_lo) / static_cast<double>(sum.histogram.size());
    for (size_t b = 0; b < sum.histogram.size(); ++b)
      csv << fmt::format("{:.12g},{:.12g},{}\n", sum.hist_lo + b * w,
                         sum.hist_lo + (b + 1) * w, sum.histogram[b]);
  }

  if (!sum.violations.empty()) {
    const std::string dir = cert_dir.empty() ? "." : cert_dir;
    std::filesystem::create_directories(dir);
    int k = 0;
    for (const auto& v : sum.violations) {
      if (k >= 8) break;
      const MultipartiteState st = conj5_trial_state(v.params, v.seed, v.optimized);
      const std::string base = dir + "/conj5_violation_" + std::to_string(k);
      save_state(st, base + ".state.json");
      Json cert = trial_record_to_json(v);
      cert["reproduce"] =
          fmt::format("qmi conj5 --trials 1 --seed {} --dims {},{},{},{}", v.seed,
                      v.params.dim_x, v.params.dim_a, v.params.dim_b, v.params.dim_g);
      save_json(cert, base + ".json");
      ++k;
    }
    table += fmt::format("violation certificates written to {}\n", dir);
  }
  emit(g, config_block(g, {{"trials", trials}, {"optimized", optimized}}), result, table);
  return sum.violations.empty() ? 0 : 3;
}

int cmd_conj4(const GlobalOpts& g, const std::string& path, const std::string& keys_arg,
              int restarts) {
  const MultipartiteState s = load_state(path);
  MultipartiteState target = s;
  bool certified_positive = false;
  if (s.dims.size() > 2) {
    // Merge into the bipartite cut (keys declare Alice's key; primed labels
    // follow their base) and record whether independence is certified.
    std::vector<std::string> keys =
        keys_arg.empty() ? std::vector<std::string>{"A", "B"} : split_csv_labels(keys_arg);
    const ExactMiReport rep = check_exact_mi(s, keys);
    certified_positive = rep.is_exact;
    std::vector<std::string> a_side{keys[0]}, b_side{keys[1]};
    for (const auto& d : s.dims) {
      if (d.label == keys[0] || d.label == keys[1]) continue;
      (d.label.rfind(keys[0], 0) == 0 ? a_side : b_side).push_back(d.label);
    }
    std::vector<std::string> order = a_side;
    order.insert(order.end(), b_side.begin(), b_side.end());
    target = permute_subsystems(densify(s), order);
    target = merge_labels(target, a_side, "Alice");
    target = merge_labels(target, b_side, "Bob");
  }
  const auto pair = conj4_search(target, g.seed, restarts < 0 ? 8 : restarts);
  Json result;
  std::string table;
  if (pair) {
    result["found"] = true;
    result["residual"] = pair->residual;
    result["constant"] = pair->constant;
    result["op_a"] = matrix_to_json(pair->op_a);
    result["op_b"] = matrix_to_json(pair->op_b);
    table += fmt::format("pair found: residual {:.3e}, constant {:.9f}\n", pair->residual,
                         pair->constant);
  } else {
    result["found"] = false;
    table += "no operator pair found\n";
    if (certified_positive) {
      result["note"] =
          "state has exact mutual independence but the search found no pair "
          "(search-limited evidence against the operator condition)";
      table += result["note"].get<std::string>() + "\n";
    }
  }
  emit(g, config_block(g, {{"input", path}}), result, table);
  return (!pair && certified_positive) ? 3 : 0;
}

int cmd_classical(const GlobalOpts& g, const std::string& sub, const std::string& path,
                  const std::string& f_path, const std::string& g_path, int n, int out_bits,
                  long trials, const std::string& csv_path) {
  const JointDistribution d = load_distribution(path);
  Json result;
  std::string table;
  if (sub == "decompose") {
    const RedundantDecomposition kd = ki_decompose(d);
    result = decomposition_to_json(kd);
    table += fmt::format("blocks {}   H(LJ) {:.12f}   reconstruction error {:.3e}\n",
                         kd.blocks.size(), kd.h_lj, kd.reconstruction_error);
    for (const auto& b : kd.blocks)
      table += fmt::format("  block {}: {} member(s)\n", b.l, b.members.size());
    if (!csv_path.empty()) {
      std::ofstream csv(csv_path);
      csv << "xy_index,l,j,k,p_k\n";
      for (const auto& [s, ljk] : kd.tau)
        csv << fmt::format("{},{},{},{},{:.12f}\n", s, ljk[0], ljk[1], ljk[2],
                           kd.blocks[ljk[0]].p_k[ljk[2]]);
    }
  } else if (sub == "rates") {
    const double sw = slepian_wolf_sum(d);
    const double hlj = optimal_rate_hlj(d);
    result["slepian_wolf_sum"] = sw;
    result["optimal_rate_hlj"] = hlj;
    table += fmt::format("H(XY) = {:.12f}\nH(LJ) = {:.12f}\n", sw, hlj);
  } else if (sub == "mindep") {
    const auto load_table = [](const std::string& tp) {
      const Json j = load_json(tp);
      return j.get<StochasticTable>();
    };
    const ClassicalMindepResult r =
        classical_mindep_rate(d, load_table(f_path), load_table(g_path));
    result = Json{{"mi_ab", r.mi_ab},
                  {"residual", r.residual},
                  {"feasible", r.feasible},
                  {"rate", r.rate},
                  {"protocol_bound", r.protocol_bound}};
    table += fmt::format("I(F:G) = {:.12f}, residual I(FG:Z) = {:.3e}\n", r.mi_ab, r.residual);
    table += fmt::format("rate = {:.12f} ({}), protocol bound = {:.12f}\n", r.rate,
                         r.feasible ? "feasible" : "infeasible", r.protocol_bound);
  } else if (sub == "hashsim") {
    const HashSimResult r = hash_sim(d, n, out_bits, trials, g.seed);
    result = hash_sim_to_json(r);
    table += fmt::format("TV from product = {:.6f} (se ~ {:.6f}), rate = {:.6f}\n",
                         r.tv_from_product, r.std_error, r.rate);
  } else {
    throw std::invalid_argument("unknown classical subcommand: " + sub);
  }
  emit(g, config_block(g, {{"input", path}}), result, table);
  return 0;
}

int cmd_selftest(const GlobalOpts& g) {
  const auto lines = run_selftest();
  int failures = 0;
  Json jl = Json::array();
  std::string table;
  for (const auto& l : lines) {
    table += fmt::format("{}  {}{}\n", l.pass ? "PASS" : "FAIL", l.name,
                         l.detail.empty() ? "" : "  [" + l.detail + "]");
    jl.push_back({{"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
    if (!l.pass) ++failures;
  }
  table += fmt::format("{} checks, {} failed\n", lines.size(), failures);
  emit(g, config_block(g), Json{{"checks", jl}, {"failures", failures}}, table);
  return failures == 0 ? 0 : 1;
}

int cmd_write_examples(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& e : shipped_corpus()) {
    if (e.is_distribution)
      save_distribution(e.dist, dir + "/" + e.name + ".dist.json");
    else
      save_state(e.state, dir + "/" + e.name + ".state.json");
  }
  std::cout << "examples written to " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum mutual independence and distributed compression toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--format", g.format, "output format: table or json")
      ->check(CLI::IsMember({"table", "json"}));
  app.add_option("--out", g.out_path, "write the report to a file");
  app.add_option("--seed", g.seed, "master seed for all randomized work");
  app.add_option("--jobs", g.jobs, "parallel worker cap")->check(CLI::PositiveNumber);

  std::string state_path, cut_arg, keys_arg, dims_arg, cert_dir, csv_path;
  std::string split_path, split_labels, iind_source, f_path, g_path, dist_path, sub, dir;
  bool skip_er = false, no_search = false;
  int restarts = -1, max_iters = -1, ext_dim = -1, trials_i = -1;
  long trials = 1000, optimized = 0;
  int n = 8, out_bits = 2;
  long hash_trials = 100000;
  std::optional<double> iind;
  double iind_val = -1.0;

  auto* info = app.add_subcommand("info", "entropic report for a state file");
  info->add_option("state", state_path)->required();

  auto* meas = app.add_subcommand("measures", "E_N, E_sq heuristic and E_r-PPT across a cut");
  meas->add_option("state", state_path)->required();
  meas->add_option("--cut", cut_arg, "comma-separated labels on the A side");
  meas->add_flag("--no-er", skip_er, "skip the E_r-PPT optimizer (it dominates the runtime)");
  meas->add_option("--restarts", restarts);
  meas->add_option("--max-iters", max_iters);
  meas->add_option("--ext-dim", ext_dim);
  meas->add_option("--trials", trials_i);

  auto* mdep = app.add_subcommand("mindep", "mutual-independence bounds for a state");
  mdep->add_option("state", state_path)->required();
  mdep->add_option("--keys", keys_arg, "key labels, default A,B");
  mdep->add_flag("--no-search", no_search, "skip the split search");
  mdep->add_flag("--no-er", skip_er, "skip the conjectural E_r-PPT upper bound");
  mdep->add_option("--restarts", restarts);

  auto* rates = app.add_subcommand("rates", "rate region report for a bipartite state");
  rates->add_option("state", state_path)->required();
  rates->add_option("--split-state", split_path, "split state rho_{a alpha b beta}");
  rates->add_option("--split-labels", split_labels, "labels as a,alpha,b,beta");
  rates->add_option("--iind", iind_val, "certified independence value to plug in");
  rates->add_option("--iind-source", iind_source, "provenance note for --iind");
  rates->add_option("--csv", csv_path, "write rate points as CSV");

  auto* c5 = app.add_subcommand("conj5", "no-locking falsification campaign");
  c5->add_option("--trials", trials);
  c5->add_option("--optimize", optimized, "number of optimized-ascent trials");
  c5->add_option("--dims", dims_arg, "dx,da,db[,dg]");
  c5->add_option("--cert-dir", cert_dir, "where to write violation certificates");
  c5->add_option("--csv", csv_path, "write the slack histogram as CSV");

  auto* c4 = app.add_subcommand("conj4", "constant-expectation operator-pair search");
  c4->add_option("state", state_path)->required();
  c4->add_option("--keys", keys_arg, "key labels for multi-part states, default A,B");
  c4->add_option("--restarts", restarts);

  auto* cl = app.add_subcommand("classical", "classical-analogue computations");
  cl->add_option("mode", sub, "decompose | rates | mindep | hashsim")->required();
  cl->add_option("dist", dist_path)->required();
  cl->add_option("--f-table", f_path, "row-stochastic table for F (JSON)");
  cl->add_option("--g-table", g_path, "row-stochastic table for G (JSON)");
  cl->add_option("--n", n, "block length");
  cl->add_option("--out-bits", out_bits, "hash output bits per side");
  cl->add_option("--trials", hash_trials, "sampling trials");
  cl->add_option("--csv", csv_path, "CSV export of decomposition tables");

  auto* st = app.add_subcommand("selftest", "run the shipped example corpus checks");
  (void)st;
  auto* we = app.add_subcommand("write-examples", "write the shipped corpus to a directory");
  we->add_option("dir", dir)->required();

  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) return cmd_info(g, state_path);
    if (meas->parsed())
      return cmd_measures(g, state_path, cut_arg, skip_er, restarts, max_iters, ext_dim,
                          trials_i);
    if (mdep->parsed())
      return cmd_mindep(g, state_path, keys_arg, !no_search, skip_er, restarts);
    if (rates->parsed()) {
      if (iind_val >= 0.0) iind = iind_val;
      return cmd_rates(g, state_path, split_path, split_labels, iind, iind_source, csv_path);
    }
    if (c5->parsed()) return cmd_conj5(g, trials, optimized, dims_arg, cert_dir, csv_path);
    if (c4->parsed()) return cmd_conj4(g, state_path, keys_arg, restarts);
    if (cl->parsed())
      return cmd_classical(g, sub, dist_path, f_path, g_path, n, out_bits, hash_trials,
                           csv_path);
    if (st->parsed()) return cmd_selftest(g);
    if (we->parsed()) return cmd_write_examples(dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
