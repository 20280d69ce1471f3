#pragma once

#include <string>
#include <vector>

#include "qmi/classical.hpp"
#include "qmi/types.hpp"

namespace qmi {

/// Shipped example corpus; quantum states and classical distributions with
/// known expected values.
struct CorpusEntry {
  std::string name;
  bool is_distribution = false;
  MultipartiteState state;
  JointDistribution dist;
};

std::vector<CorpusEntry> shipped_corpus();

struct SelftestLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Embedded expected-value checks over the shipped corpus.
std::vector<SelftestLine> run_selftest();

}  // namespace qmi
