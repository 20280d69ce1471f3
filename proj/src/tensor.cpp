#include "qmi/tensor.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "qmi/defaults.hpp"
#include "qmi/linalg.hpp"

namespace qmi {

namespace {

using RowMat = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row-major strides: stride[j] = product of dims after j.
std::vector<long> strides_of(const std::vector<LabeledDim>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int j = static_cast<int>(dims.size()) - 2; j >= 0; --j)
    s[j] = s[j + 1] * dims[j + 1].dim;
  return s;
}

// Linear offsets contributed to the full index by a sub-multi-index running
// row-major over the subsystems at `pos` (in the given order).
std::vector<long> sub_offsets(const std::vector<LabeledDim>& dims,
                              const std::vector<int>& pos) {
  const auto full = strides_of(dims);
  long total = 1;
  for (int p : pos) total *= dims[p].dim;
  std::vector<long> out(total);
  std::vector<int> digit(pos.size(), 0);
  for (long idx = 0; idx < total; ++idx) {
    long off = 0;
    for (size_t k = 0; k < pos.size(); ++k) off += static_cast<long>(digit[k]) * full[pos[k]];
    out[idx] = off;
    for (int k = static_cast<int>(pos.size()) - 1; k >= 0; --k) {
      if (++digit[k] < dims[pos[k]].dim) break;
      digit[k] = 0;
    }
  }
  return out;
}

std::vector<int> positions_in_order(const MultipartiteState& s,
                                    const std::vector<std::string>& labels) {
  std::vector<int> pos;
  pos.reserve(labels.size());
  for (const auto& l : labels) pos.push_back(s.position(l));
  return pos;
}

// Positions of `subset` sorted by their original position.
std::vector<int> sorted_positions(const MultipartiteState& s,
                                  const std::vector<std::string>& subset) {
  auto pos = positions_in_order(s, subset);
  std::sort(pos.begin(), pos.end());
  return pos;
}

std::vector<int> complement_positions(const MultipartiteState& s,
                                      const std::vector<int>& chosen) {
  std::set<int> taken(chosen.begin(), chosen.end());
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(s.dims.size()); ++i)
    if (!taken.count(i)) rest.push_back(i);
  return rest;
}

}  // namespace

MultipartiteState tensor_product(const MultipartiteState& a, const MultipartiteState& b) {
  for (const auto& d : b.dims)
    if (a.has_label(d.label))
      throw std::invalid_argument("tensor_product: label collision on '" + d.label + "'");
  MultipartiteState out;
  out.dims = a.dims;
  out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  if (a.kind == StateKind::pure_vector && b.kind == StateKind::pure_vector) {
    out.kind = StateKind::pure_vector;
    out.matrix = kron(a.matrix, b.matrix);
  } else {
    const MultipartiteState da = densify(a);
    const MultipartiteState db = densify(b);
    out.kind = StateKind::density;
    out.matrix = kron(da.matrix, db.matrix);
  }
  return out;
}

MultipartiteState densify(const MultipartiteState& s) {
  if (s.kind == StateKind::density) return s;
  MultipartiteState out;
  out.dims = s.dims;
  out.kind = StateKind::density;
  out.matrix = s.matrix * s.matrix.adjoint();
  return out;
}

MultipartiteState permute_subsystems(const MultipartiteState& s,
                                     const std::vector<std::string>& order) {
  if (order.size() != s.dims.size())
    throw std::invalid_argument("permute_subsystems: order must list every label once");
  std::vector<LabeledDim> new_dims;
  new_dims.reserve(order.size());
  for (const auto& l : order) new_dims.push_back(s.dims[s.position(l)]);
  {
    std::set<std::string> seen(order.begin(), order.end());
    if (seen.size() != order.size())
      throw std::invalid_argument("permute_subsystems: repeated label in order");
  }

  const auto old_strides = strides_of(s.dims);
  const auto new_strides = strides_of(new_dims);
  // new position of old subsystem j
  std::vector<int> np(s.dims.size());
  for (size_t j = 0; j < s.dims.size(); ++j) {
    const auto it = std::find(order.begin(), order.end(), s.dims[j].label);
    np[j] = static_cast<int>(it - order.begin());
  }
  const long n = s.total_dim();
  std::vector<long> map(n);
  for (long i = 0; i < n; ++i) {
    long rem = i, out_idx = 0;
    for (size_t j = 0; j < s.dims.size(); ++j) {
      const long digit = rem / old_strides[j];
      rem %= old_strides[j];
      out_idx += digit * new_strides[np[j]];
    }
    map[i] = out_idx;
  }

  MultipartiteState out;
  out.dims = std::move(new_dims);
  out.kind = s.kind;
  if (s.kind == StateKind::pure_vector) {
    Vec v(n);
    for (long i = 0; i < n; ++i) v[map[i]] = s.matrix(i, 0);
    out.matrix = v;
  } else {
    Mat m(n, n);
    for (long r = 0; r < n; ++r)
      for (long c = 0; c < n; ++c) m(map[r], map[c]) = s.matrix(r, c);
    out.matrix = m;
  }
  return out;
}

MultipartiteState partial_trace(const MultipartiteState& s,
                                const std::vector<std::string>& keep) {
  const auto kp = sorted_positions(s, keep);
  const auto tp = complement_positions(s, kp);
  std::vector<LabeledDim> kept_dims;
  for (int p : kp) kept_dims.push_back(s.dims[p]);
  const long dk = product_of_dims(kept_dims);

  if (tp.empty()) {
    MultipartiteState out = densify(s);
    out.dims = kept_dims;
    return out;
  }

  if (s.kind == StateKind::pure_vector) {
    // Matricize across keep : traced and contract.
    std::vector<std::string> order;
    for (int p : kp) order.push_back(s.dims[p].label);
    for (int p : tp) order.push_back(s.dims[p].label);
    const MultipartiteState perm = permute_subsystems(s, order);
    const long dt = perm.total_dim() / dk;
    Eigen::Map<const RowMat> m(perm.matrix.data(), dk, dt);
    MultipartiteState out;
    out.dims = kept_dims;
    out.kind = StateKind::density;
    out.matrix = m * m.adjoint();
    return out;
  }

  const auto ko = sub_offsets(s.dims, kp);
  const auto to = sub_offsets(s.dims, tp);
  Mat res = Mat::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      cxd acc(0.0, 0.0);
      for (long t : to) acc += s.matrix(ko[r] + t, ko[c] + t);
      res(r, c) = acc;
    }
  MultipartiteState out;
  out.dims = std::move(kept_dims);
  out.kind = StateKind::density;
  out.matrix = std::move(res);
  return out;
}

MultipartiteState partial_transpose(const MultipartiteState& s,
                                    const std::vector<std::string>& flip) {
  if (s.kind != StateKind::density)
    throw std::invalid_argument("partial_transpose: density inputs only");
  const auto fp = sorted_positions(s, flip);
  const auto rp = complement_positions(s, fp);
  const auto fo = sub_offsets(s.dims, fp);
  const auto ro = sub_offsets(s.dims, rp);
  Mat res(s.matrix.rows(), s.matrix.cols());
  for (long r1 : ro)
    for (long r2 : ro)
      for (long f1 : fo)
        for (long f2 : fo) res(r1 + f2, r2 + f1) = s.matrix(r1 + f1, r2 + f2);
  MultipartiteState out;
  out.dims = s.dims;
  out.kind = StateKind::density;
  out.matrix = std::move(res);
  return out;
}

MultipartiteState purify(const MultipartiteState& s, const std::string& purifier_label) {
  if (s.kind != StateKind::density)
    throw std::invalid_argument("purify: density inputs only");
  if (s.has_label(purifier_label))
    throw std::invalid_argument("purify: purifier label '" + purifier_label + "' already in use");
  const HermEig e = herm_eig_sorted(s.matrix);
  if (e.values.size() > 0 && e.values.minCoeff() < -defaults::psd_tol)
    throw std::invalid_argument("purify: input not positive semidefinite (min eigenvalue = " +
                                std::to_string(e.values.minCoeff()) + ")");
  const long n = s.total_dim();
  int rank = 0;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values[i] > defaults::rank_cutoff) ++rank;
  rank = std::max(rank, 1);
  Vec psi = Vec::Zero(n * rank);
  for (int p = 0; p < rank; ++p) {
    const double w = std::sqrt(std::max(0.0, e.values[p]));
    for (long a = 0; a < n; ++a) psi[a * rank + p] = w * e.vectors(a, p);
  }
  MultipartiteState out;
  out.dims = s.dims;
  out.dims.push_back({purifier_label, rank});
  out.kind = StateKind::pure_vector;
  out.matrix = psi;
  return out;
}

namespace {

// out[b, o, a] = sum_i V[o, i] psi[b, i, a] with row-major blocks.
Vec apply_block_operator(const Vec& psi, const Mat& v, long d_before, long d_in,
                         long d_out, long d_after) {
  Vec out(d_before * d_out * d_after);
  for (long b = 0; b < d_before; ++b) {
    Eigen::Map<const RowMat> in_blk(psi.data() + b * d_in * d_after, d_in, d_after);
    Eigen::Map<RowMat> out_blk(out.data() + b * d_out * d_after, d_out, d_after);
    out_blk = v * in_blk;
  }
  return out;
}

}  // namespace

MultipartiteState apply_isometry(const MultipartiteState& s, const Isometry& v) {
  if (v.in_dims.empty()) throw std::invalid_argument("apply_isometry: empty input dims");
  // Locate the contiguous run of subsystems matching v.in_dims.
  int start = -1;
  for (size_t i = 0; i + v.in_dims.size() <= s.dims.size(); ++i) {
    bool ok = true;
    for (size_t k = 0; k < v.in_dims.size(); ++k) {
      if (s.dims[i + k].label != v.in_dims[k].label ||
          s.dims[i + k].dim != v.in_dims[k].dim) {
        ok = false;
        break;
      }
    }
    if (ok) {
      start = static_cast<int>(i);
      break;
    }
  }
  if (start < 0)
    throw std::invalid_argument(
        "apply_isometry: input dims do not match a contiguous labeled subset");
  const long din = product_of_dims(v.in_dims);
  const long dout = product_of_dims(v.out_dims);
  if (v.matrix.cols() != din || v.matrix.rows() != dout)
    throw std::invalid_argument("apply_isometry: dimension mismatch between matrix and dims");

  long d_before = 1, d_after = 1;
  for (int i = 0; i < start; ++i) d_before *= s.dims[i].dim;
  for (size_t i = start + v.in_dims.size(); i < s.dims.size(); ++i) d_after *= s.dims[i].dim;

  std::vector<LabeledDim> new_dims(s.dims.begin(), s.dims.begin() + start);
  new_dims.insert(new_dims.end(), v.out_dims.begin(), v.out_dims.end());
  new_dims.insert(new_dims.end(), s.dims.begin() + start + v.in_dims.size(), s.dims.end());
  {
    std::set<std::string> seen;
    for (const auto& d : new_dims)
      if (!seen.insert(d.label).second)
        throw std::invalid_argument("apply_isometry: output label '" + d.label +
                                    "' collides with a remaining subsystem");
  }

  MultipartiteState out;
  out.dims = std::move(new_dims);
  out.kind = s.kind;
  if (s.kind == StateKind::pure_vector) {
    out.matrix = apply_block_operator(s.matrix, v.matrix, d_before, din, dout, d_after);
    return out;
  }
  // rho' = U rho U^+ computed as (U (U rho)^+)^+ with U = 1 (x) V (x) 1.
  const long n_in = s.total_dim();
  const long n_out = d_before * dout * d_after;
  Mat t(n_out, n_in);
  for (long c = 0; c < n_in; ++c)
    t.col(c) = apply_block_operator(s.matrix.col(c), v.matrix, d_before, din, dout, d_after);
  Mat res(n_out, n_out);
  const Mat t_adj = t.adjoint();
  for (long c = 0; c < n_out; ++c)
    res.col(c) = apply_block_operator(t_adj.col(c), v.matrix, d_before, din, dout, d_after);
  out.matrix = res.adjoint();
  return out;
}

MultipartiteState split_label(const MultipartiteState& s, const std::string& label,
                              int d1, int d2, const std::string& first,
                              const std::string& second) {
  const int p = s.position(label);
  if (s.dims[p].dim != d1 * d2)
    throw std::invalid_argument("split_label: " + label + " has dim " +
                                std::to_string(s.dims[p].dim) + ", not " +
                                std::to_string(d1) + "*" + std::to_string(d2));
  MultipartiteState out = s;
  out.dims[p] = {first, d1};
  out.dims.insert(out.dims.begin() + p + 1, {second, d2});
  for (size_t i = 0; i < out.dims.size(); ++i)
    for (size_t j = i + 1; j < out.dims.size(); ++j)
      if (out.dims[i].label == out.dims[j].label)
        throw std::invalid_argument("split_label: duplicate label '" + out.dims[i].label + "'");
  return out;
}

MultipartiteState merge_labels(const MultipartiteState& s,
                               const std::vector<std::string>& which,
                               const std::string& merged) {
  if (which.empty()) throw std::invalid_argument("merge_labels: empty merge set");
  const int p0 = s.position(which[0]);
  long d = 1;
  for (size_t k = 0; k < which.size(); ++k) {
    const int p = s.position(which[k]);
    if (p != p0 + static_cast<int>(k))
      throw std::invalid_argument("merge_labels: labels must be consecutive");
    d *= s.dims[p].dim;
  }
  MultipartiteState out = s;
  out.dims.erase(out.dims.begin() + p0, out.dims.begin() + p0 + which.size());
  out.dims.insert(out.dims.begin() + p0, {merged, static_cast<int>(d)});
  return out;
}

double state_trace_distance(const MultipartiteState& a, const MultipartiteState& b) {
  const MultipartiteState da = densify(a);
  MultipartiteState db = densify(b);
  if (da.labels() != db.labels()) db = permute_subsystems(db, da.labels());
  if (da.total_dim() != db.total_dim())
    throw std::invalid_argument("state_trace_distance: dimension mismatch");
  return trace_distance(da.matrix, db.matrix);
}

}  // namespace qmi
