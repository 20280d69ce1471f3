#pragma once

#include <string>

#include <json.hpp>

#include "qmi/classical.hpp"
#include "qmi/compression.hpp"
#include "qmi/conjectures.hpp"
#include "qmi/entropy.hpp"
#include "qmi/measures.hpp"
#include "qmi/mindep.hpp"

namespace qmi {

using Json = nlohmann::ordered_json;

// State file format:
//   {"dims":[{"label":"A","dim":2},...],"kind":"density","matrix":[[re,im],...]}
// with row-major flattening; "pure-vector" carries the vector entries.
// Readers reject invariant violations with a diagnostic naming the invariant.
Json state_to_json(const MultipartiteState& s);
MultipartiteState state_from_json(const Json& j);

// Distribution file format:
//   {"alphabets":[{"label":"X","size":2},...],"probs":[...]} row-major.
Json distribution_to_json(const JointDistribution& p);
JointDistribution distribution_from_json(const Json& j);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j, long rows, long cols);

// Reports. Every report the CLI emits re-parses into its originating type.
Json entropic_report_to_json(const EntropicReport& r);
EntropicReport entropic_report_from_json(const Json& j);
Json measure_result_to_json(const MeasureResult& r);
MeasureResult measure_result_from_json(const Json& j);
Json independence_report_to_json(const IndependenceReport& r);
IndependenceReport independence_report_from_json(const Json& j);
Json exact_mi_report_to_json(const ExactMiReport& r);
ExactMiReport exact_mi_report_from_json(const Json& j);
Json rate_point_to_json(const RatePoint& p);
RatePoint rate_point_from_json(const Json& j);
Json converse_bounds_to_json(const ConverseBounds& b);
ConverseBounds converse_bounds_from_json(const Json& j);
Json split_to_json(const SubsystemSplit& s);
SubsystemSplit split_from_json(const Json& j);
Json trial_record_to_json(const TrialRecord& r);
TrialRecord trial_record_from_json(const Json& j);
Json conj5_summary_to_json(const Conj5Summary& s);
Conj5Summary conj5_summary_from_json(const Json& j);
Json decomposition_to_json(const RedundantDecomposition& d);
RedundantDecomposition decomposition_from_json(const Json& j);
Json hash_sim_to_json(const HashSimResult& r);
HashSimResult hash_sim_from_json(const Json& j);

// Files.
Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);
MultipartiteState load_state(const std::string& path);
void save_state(const MultipartiteState& s, const std::string& path);
JointDistribution load_distribution(const std::string& path);
void save_distribution(const JointDistribution& p, const std::string& path);

}  // namespace qmi
