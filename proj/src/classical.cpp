#include "qmi/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <stdexcept>

#include "qmi/defaults.hpp"
#include "qmi/rng.hpp"

namespace qmi {

namespace {
constexpr double kZero = 1e-12;       // structural-zero threshold
constexpr double kLogRatioTol = 1e-9;  // tolerance on log-ratio mismatches
}  // namespace

long JointDistribution::total_size() const {
  long n = 1;
  for (const auto& a : alphabets) n *= a.size;
  return n;
}

int JointDistribution::position(const std::string& label) const {
  for (size_t i = 0; i < alphabets.size(); ++i)
    if (alphabets[i].label == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown alphabet label: " + label);
}

int JointDistribution::size_of(const std::string& label) const {
  return alphabets[position(label)].size;
}

std::vector<std::string> JointDistribution::labels() const {
  std::vector<std::string> out;
  for (const auto& a : alphabets) out.push_back(a.label);
  return out;
}

void validate_distribution(const JointDistribution& p) {
  std::set<std::string> seen;
  for (const auto& a : p.alphabets) {
    if (a.size < 1)
      throw std::invalid_argument("distribution invariant violated: positive-sizes ('" +
                                  a.label + "')");
    if (!seen.insert(a.label).second)
      throw std::invalid_argument(
          "distribution invariant violated: label-uniqueness (duplicate '" + a.label + "')");
  }
  if (static_cast<long>(p.probs.size()) != p.total_size())
    throw std::invalid_argument(
        "distribution invariant violated: sizes-product (probs length " +
        std::to_string(p.probs.size()) + " vs " + std::to_string(p.total_size()) + ")");
  double sum = 0.0;
  for (double v : p.probs) {
    if (v < -1e-15)
      throw std::invalid_argument(
          "distribution invariant violated: nonnegativity (entry " + std::to_string(v) + ")");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("distribution invariant violated: normalization (sum = " +
                                std::to_string(sum) + ")");
}

namespace {

std::vector<long> strides_of(const std::vector<Alphabet>& alphabets) {
  std::vector<long> s(alphabets.size(), 1);
  for (int j = static_cast<int>(alphabets.size()) - 2; j >= 0; --j)
    s[j] = s[j + 1] * alphabets[j + 1].size;
  return s;
}

std::vector<int> digits_of(long idx, const std::vector<long>& strides) {
  std::vector<int> d(strides.size());
  for (size_t j = 0; j < strides.size(); ++j) {
    d[j] = static_cast<int>(idx / strides[j]);
    idx %= strides[j];
  }
  return d;
}

}  // namespace

JointDistribution marginal(const JointDistribution& p, const std::vector<std::string>& keep) {
  std::set<int> kp;
  for (const auto& l : keep) kp.insert(p.position(l));
  JointDistribution out;
  std::vector<int> kept;
  for (size_t i = 0; i < p.alphabets.size(); ++i)
    if (kp.count(static_cast<int>(i))) {
      out.alphabets.push_back(p.alphabets[i]);
      kept.push_back(static_cast<int>(i));
    }
  const auto strides = strides_of(p.alphabets);
  const auto out_strides = strides_of(out.alphabets);
  out.probs.assign(out.total_size(), 0.0);
  for (long i = 0; i < static_cast<long>(p.probs.size()); ++i) {
    const auto dg = digits_of(i, strides);
    long oi = 0;
    for (size_t k = 0; k < kept.size(); ++k) oi += dg[kept[k]] * out_strides[k];
    out.probs[oi] += p.probs[i];
  }
  return out;
}

double shannon_entropy(const JointDistribution& p, const std::vector<std::string>& part) {
  if (part.empty()) return 0.0;
  const JointDistribution m = marginal(p, part);
  double h = 0.0;
  for (double v : m.probs)
    if (v > defaults::entropy_cutoff) h -= v * std::log2(v);
  return h;
}

double classical_mi(const JointDistribution& p, const std::vector<std::string>& a,
                    const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return shannon_entropy(p, a) + shannon_entropy(p, b) - shannon_entropy(p, ab);
}

double classical_cmi(const JointDistribution& p, const std::vector<std::string>& a,
                     const std::vector<std::string>& b, const std::vector<std::string>& z) {
  if (z.empty()) return classical_mi(p, a, b);
  std::vector<std::string> az = a, bz = b, abz = a;
  az.insert(az.end(), z.begin(), z.end());
  bz.insert(bz.end(), z.begin(), z.end());
  abz.insert(abz.end(), b.begin(), b.end());
  abz.insert(abz.end(), z.begin(), z.end());
  return shannon_entropy(p, az) + shannon_entropy(p, bz) - shannon_entropy(p, abz) -
         shannon_entropy(p, z);
}

double slepian_wolf_sum(const JointDistribution& p, const std::vector<std::string>& xy) {
  return shannon_entropy(p, xy);
}

// ---------------------------------------------------------------------------
// Redundant decomposition
// ---------------------------------------------------------------------------

RedundantDecomposition ki_decompose(const JointDistribution& p,
                                    const std::vector<std::string>& xy) {
  std::vector<std::string> z_labels;
  {
    std::set<std::string> cover(xy.begin(), xy.end());
    for (const auto& a : p.alphabets)
      if (!cover.count(a.label)) z_labels.push_back(a.label);
  }
  // Flatten to a front (XY) x back (Z) table; XY order follows `xy`.
  std::vector<std::string> order = xy;
  order.insert(order.end(), z_labels.begin(), z_labels.end());
  JointDistribution flat;
  {
    // Reorder probs into (xy..., z...) row-major.
    std::vector<int> perm;
    for (const auto& l : order) perm.push_back(p.position(l));
    for (int pos : perm) flat.alphabets.push_back(p.alphabets[pos]);
    flat.probs.assign(p.probs.size(), 0.0);
    const auto strides = strides_of(p.alphabets);
    const auto nstrides = strides_of(flat.alphabets);
    for (long i = 0; i < static_cast<long>(p.probs.size()); ++i) {
      const auto dg = digits_of(i, strides);
      long ni = 0;
      for (size_t k = 0; k < perm.size(); ++k) ni += dg[perm[k]] * nstrides[k];
      flat.probs[ni] = p.probs[i];
    }
  }
  long n_xy = 1;
  for (size_t k = 0; k < xy.size(); ++k) n_xy *= flat.alphabets[k].size;
  const long n_z = flat.total_size() / n_xy;

  auto joint = [&](long s, long z) { return flat.probs[s * n_z + z]; };

  std::vector<double> pz(n_z, 0.0), pxy(n_xy, 0.0);
  for (long s = 0; s < n_xy; ++s)
    for (long z = 0; z < n_z; ++z) {
      pz[z] += joint(s, z);
      pxy[s] += joint(s, z);
    }
  std::vector<long> valid_z;
  for (long z = 0; z < n_z; ++z)
    if (pz[z] > kZero) valid_z.push_back(z);
  std::vector<long> support;
  for (long s = 0; s < n_xy; ++s)
    if (pxy[s] > kZero) support.push_back(s);

  // Profiles proportional across z? (structural zeros must match, log-ratios
  // constant within tolerance)
  auto matches = [&](long s, long r) {
    bool have_ratio = false;
    double ratio0 = 0.0;
    for (long z : valid_z) {
      const double u = joint(s, z), v = joint(r, z);
      const bool zu = u <= kZero, zv = v <= kZero;
      if (zu != zv) return false;
      if (zu) continue;
      const double t = std::log(u) - std::log(v);
      if (!have_ratio) {
        ratio0 = t;
        have_ratio = true;
      } else if (std::abs(t - ratio0) > kLogRatioTol) {
        return false;
      }
    }
    return have_ratio;
  };

  // Refine from the coarsest partition: scan each class in lexicographic
  // order, split off everything that mismatches the representative, repeat
  // until stable.
  std::vector<std::vector<long>> classes;
  if (!support.empty()) classes.push_back(support);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<long>> next;
    for (auto& cls : classes) {
      std::vector<long> keep{cls[0]}, split;
      for (size_t i = 1; i < cls.size(); ++i)
        (matches(cls[i], cls[0]) ? keep : split).push_back(cls[i]);
      next.push_back(std::move(keep));
      if (!split.empty()) {
        next.push_back(std::move(split));
        changed = true;
      }
    }
    classes = std::move(next);
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });

  RedundantDecomposition out;
  out.q_l_given_z.assign(valid_z.size(), std::vector<double>(classes.size(), 0.0));
  std::vector<double> p_l(classes.size(), 0.0);
  for (size_t l = 0; l < classes.size(); ++l) {
    RedundantDecomposition::Block blk;
    blk.l = static_cast<int>(l);
    blk.members = classes[l];
    double tot = 0.0;
    for (long s : classes[l]) tot += pxy[s];
    p_l[l] = tot;
    for (size_t k = 0; k < classes[l].size(); ++k) {
      blk.p_k.push_back(pxy[classes[l][k]] / tot);
      out.tau[classes[l][k]] = {static_cast<int>(l), 0, static_cast<int>(k)};
    }
    for (size_t zi = 0; zi < valid_z.size(); ++zi) {
      double q = 0.0;
      for (long s : classes[l]) q += joint(s, valid_z[zi]);
      out.q_l_given_z[zi][l] = q / pz[valid_z[zi]];
    }
    out.blocks.push_back(std::move(blk));
  }

  double err = 0.0;
  for (size_t zi = 0; zi < valid_z.size(); ++zi) {
    for (size_t l = 0; l < classes.size(); ++l) {
      for (size_t k = 0; k < classes[l].size(); ++k) {
        const long s = classes[l][k];
        const double lhs = joint(s, valid_z[zi]) / pz[valid_z[zi]];
        const double rhs = out.q_l_given_z[zi][l] * out.blocks[l].p_k[k];
        err = std::max(err, std::abs(lhs - rhs));
      }
    }
  }
  out.reconstruction_error = err;

  double h = 0.0;
  for (double v : p_l)
    if (v > defaults::entropy_cutoff) h -= v * std::log2(v);
  out.h_lj = h;
  return out;
}

double optimal_rate_hlj(const JointDistribution& p, const std::vector<std::string>& xy) {
  return ki_decompose(p, xy).h_lj;
}

JointDistribution make_corr_anticorr(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("make_corr_anticorr: p must be in [0,1]");
  JointDistribution d;
  d.alphabets = {{"X", 2}, {"Y", 2}, {"Z", 2}};  // Z: 0 = correlated, 1 = anti
  d.probs.assign(8, 0.0);
  d.probs[0b000] = p / 2;        // x=0,y=0,z=c
  d.probs[0b110] = p / 2;        // x=1,y=1,z=c
  d.probs[0b011] = (1 - p) / 2;  // x=0,y=1,z=a
  d.probs[0b101] = (1 - p) / 2;  // x=1,y=0,z=a
  return d;
}

// ---------------------------------------------------------------------------
// Classical mutual-independence rate
// ---------------------------------------------------------------------------

namespace {

void validate_table(const StochasticTable& t, int rows, const char* name) {
  if (static_cast<int>(t.size()) != rows)
    throw std::invalid_argument(std::string(name) + ": need one row per input symbol");
  const size_t cols = t.empty() ? 0 : t[0].size();
  for (const auto& row : t) {
    if (row.size() != cols || cols == 0)
      throw std::invalid_argument(std::string(name) + ": ragged or empty table");
    double sum = 0.0;
    for (double v : row) {
      if (v < -1e-15) throw std::invalid_argument(std::string(name) + ": negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument(std::string(name) + ": rows must sum to 1");
  }
}

}  // namespace

ClassicalMindepResult classical_mindep_rate(const JointDistribution& p,
                                            const StochasticTable& f_table,
                                            const StochasticTable& g_table) {
  const int nx = p.size_of("X"), ny = p.size_of("Y");
  validate_table(f_table, nx, "f_table");
  validate_table(g_table, ny, "g_table");
  const int nf = static_cast<int>(f_table[0].size());
  const int ng = static_cast<int>(g_table[0].size());

  std::vector<std::string> z_labels;
  for (const auto& a : p.alphabets)
    if (a.label != "X" && a.label != "Y") z_labels.push_back(a.label);

  // Build P'(f, g, z...) over fresh output labels.
  JointDistribution out;
  out.alphabets.push_back({"F", nf});
  out.alphabets.push_back({"G", ng});
  for (const auto& l : z_labels) out.alphabets.push_back({l, p.size_of(l)});
  out.probs.assign(out.total_size(), 0.0);

  const auto strides = strides_of(p.alphabets);
  const int px = p.position("X"), py = p.position("Y");
  std::vector<int> pzs;
  for (const auto& l : z_labels) pzs.push_back(p.position(l));
  const auto ostrides = strides_of(out.alphabets);
  for (long i = 0; i < static_cast<long>(p.probs.size()); ++i) {
    if (p.probs[i] <= 0.0) continue;
    const auto dg = digits_of(i, strides);
    long zoff = 0;
    for (size_t k = 0; k < pzs.size(); ++k) zoff += dg[pzs[k]] * ostrides[2 + k];
    for (int f = 0; f < nf; ++f) {
      const double wf = f_table[dg[px]][f];
      if (wf <= 0.0) continue;
      for (int g = 0; g < ng; ++g) {
        const double wg = g_table[dg[py]][g];
        if (wg <= 0.0) continue;
        out.probs[f * ostrides[0] + g * ostrides[1] + zoff] += p.probs[i] * wf * wg;
      }
    }
  }

  ClassicalMindepResult res;
  res.mi_ab = classical_mi(out, {"F"}, {"G"});
  res.residual = classical_mi(out, {"F", "G"}, z_labels);
  res.feasible = res.residual <= 1e-9;
  res.rate = res.feasible ? res.mi_ab : 0.0;
  res.protocol_bound = std::max(
      0.0, res.mi_ab - classical_mi(out, {"F"}, z_labels) - classical_mi(out, {"G"}, z_labels));
  return res;
}

// ---------------------------------------------------------------------------
// Privacy-amplification simulation
// ---------------------------------------------------------------------------

HashSimResult hash_sim(const JointDistribution& p, int n, int out_bits, long trials,
                       std::uint64_t seed) {
  if (n < 1 || trials < 1) throw std::invalid_argument("hash_sim: need n >= 1, trials >= 1");
  if (out_bits < 0 || out_bits > 31)  // (ua, ub) pack into one 64-bit key
    throw std::invalid_argument("hash_sim: out_bits must be in [0, 31]");
  const int nx = p.size_of("X"), ny = p.size_of("Y");
  const auto check_budget = [&](int alphabet, const char* side) {
    const long cap = static_cast<long>(std::floor(n * std::log2(alphabet) + 1e-9));
    if (out_bits > cap)
      throw std::invalid_argument(std::string("hash_sim: out_bits exceeds n log2|") + side +
                                  "|");
  };
  check_budget(nx, "X");
  check_budget(ny, "Y");

  std::vector<std::string> z_labels;
  for (const auto& a : p.alphabets)
    if (a.label != "X" && a.label != "Y") z_labels.push_back(a.label);
  long nz = 1;
  for (const auto& l : z_labels) nz *= p.size_of(l);
  if (nz > 255) throw std::invalid_argument("hash_sim: joint Z alphabet above 255");

  const int mbits_x = std::max(1, static_cast<int>(std::ceil(std::log2(nx))));
  const int mbits_y = std::max(1, static_cast<int>(std::ceil(std::log2(ny))));

  Rng rng(seed);
  // Hash matrices over GF(2), one row per output bit.
  auto sample_matrix = [&](int cols) {
    std::vector<std::vector<uint8_t>> m(out_bits, std::vector<uint8_t>(cols));
    for (auto& row : m)
      for (auto& bit : row) bit = rng.uniform() < 0.5 ? 1 : 0;
    return m;
  };
  const auto mat_a = sample_matrix(n * mbits_x);
  const auto mat_b = sample_matrix(n * mbits_y);

  // Per-copy sampling by inverse CDF over the (x, y, z) joint.
  const JointDistribution flat = [&] {
    std::vector<std::string> order = {"X", "Y"};
    order.insert(order.end(), z_labels.begin(), z_labels.end());
    JointDistribution f;
    for (const auto& l : order) f.alphabets.push_back({l, p.size_of(l)});
    f.probs.assign(p.probs.size(), 0.0);
    const auto strides = strides_of(p.alphabets);
    const auto nstrides = strides_of(f.alphabets);
    std::vector<int> perm;
    for (const auto& l : order) perm.push_back(p.position(l));
    for (long i = 0; i < static_cast<long>(p.probs.size()); ++i) {
      const auto dg = digits_of(i, strides);
      long ni = 0;
      for (size_t k = 0; k < perm.size(); ++k) ni += dg[perm[k]] * nstrides[k];
      f.probs[ni] = p.probs[i];
    }
    return f;
  }();
  std::vector<double> cdf(flat.probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < flat.probs.size(); ++i) {
    acc += flat.probs[i];
    cdf[i] = acc;
  }

  auto hash_bits = [&](const std::vector<uint8_t>& bits,
                       const std::vector<std::vector<uint8_t>>& m) {
    std::uint64_t u = 0;
    for (int r = 0; r < out_bits; ++r) {
      uint8_t parity = 0;
      for (size_t c = 0; c < bits.size(); ++c) parity ^= (m[r][c] & bits[c]);
      u |= static_cast<std::uint64_t>(parity) << r;
    }
    return u;
  };

  std::map<std::string, long> joint_counts;
  std::map<std::uint64_t, long> u_counts;  // (ua << out_bits) | ub packed
  std::map<std::string, long> z_counts;

  std::vector<uint8_t> xbits(n * mbits_x), ybits(n * mbits_y);
  std::string zstr(n, '\0');
  for (long t = 0; t < trials; ++t) {
    for (int c = 0; c < n; ++c) {
      const double u = rng.uniform();
      const long idx =
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      const long safe = std::min<long>(idx, static_cast<long>(cdf.size()) - 1);
      const long x = safe / (ny * nz);
      const long y = (safe / nz) % ny;
      const long z = safe % nz;
      for (int b = 0; b < mbits_x; ++b) xbits[c * mbits_x + b] = (x >> b) & 1;
      for (int b = 0; b < mbits_y; ++b) ybits[c * mbits_y + b] = (y >> b) & 1;
      zstr[c] = static_cast<char>(z);
    }
    const std::uint64_t ua = hash_bits(xbits, mat_a);
    const std::uint64_t ub = hash_bits(ybits, mat_b);
    const std::uint64_t upair = (ua << out_bits) | ub;
    std::string key(8, '\0');
    std::memcpy(key.data(), &upair, 8);
    key += zstr;
    ++joint_counts[key];
    ++u_counts[upair];
    ++z_counts[zstr];
  }

  const double tinv = 1.0 / static_cast<double>(trials);
  double sum_abs = 0.0, seen_product_mass = 0.0;
  for (const auto& [key, cnt] : joint_counts) {
    std::uint64_t upair = 0;
    std::memcpy(&upair, key.data(), 8);
    const std::string zkey = key.substr(8);
    const double pj = cnt * tinv;
    const double pu = u_counts.at(upair) * tinv;
    const double pz = z_counts.at(zkey) * tinv;
    sum_abs += std::abs(pj - pu * pz);
    seen_product_mass += pu * pz;
  }
  HashSimResult res;
  res.tv_from_product = 0.5 * (sum_abs + (1.0 - seen_product_mass));
  res.observed_cells = static_cast<long>(joint_counts.size());
  res.std_error = 0.5 * std::sqrt(static_cast<double>(res.observed_cells) * tinv);
  res.rate = static_cast<double>(out_bits) / n;
  return res;
}

}  // namespace qmi
