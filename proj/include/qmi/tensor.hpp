#pragma once

#include "qmi/types.hpp"

namespace qmi {

/// Kronecker product of the carriers; dims concatenate (a then b).
/// Mixed kinds promote the pure vector to a density first.
MultipartiteState tensor_product(const MultipartiteState& a, const MultipartiteState& b);

/// Trace out everything not in `keep`; kept labels stay in original order.
/// Pure-vector input yields the reduced density operator.
MultipartiteState partial_trace(const MultipartiteState& s,
                                const std::vector<std::string>& keep);

/// Transpose the subsystems in `flip` (densities only).
MultipartiteState partial_transpose(const MultipartiteState& s,
                                    const std::vector<std::string>& flip);

/// Standard purification: eigendecompose, keep eigenvalues above the rank
/// cutoff sorted descending (deterministic tie-break), purifier appended as
/// the last subsystem with dim = numerical rank.
MultipartiteState purify(const MultipartiteState& s, const std::string& purifier_label);

/// Apply V to a contiguous labeled subset matching v.in_dims; the subset is
/// replaced in place by v.out_dims.
MultipartiteState apply_isometry(const MultipartiteState& s, const Isometry& v);

/// Reorder subsystems; `order` must be a permutation of the labels.
MultipartiteState permute_subsystems(const MultipartiteState& s,
                                     const std::vector<std::string>& order);

/// Reinterpret one subsystem of dim d1*d2 as two subsystems (d1 first,
/// row-major). Pure relabeling, no data movement.
MultipartiteState split_label(const MultipartiteState& s, const std::string& label,
                              int d1, int d2, const std::string& first,
                              const std::string& second);

/// Merge consecutive subsystems into one labeled block (row-major).
MultipartiteState merge_labels(const MultipartiteState& s,
                               const std::vector<std::string>& which,
                               const std::string& merged);

/// |psi><psi| for pure vectors; identity on densities.
MultipartiteState densify(const MultipartiteState& s);

double state_trace_distance(const MultipartiteState& a, const MultipartiteState& b);

}  // namespace qmi
