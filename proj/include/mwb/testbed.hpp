#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mwb/config.hpp"
#include "mwb/counting.hpp"

namespace mwb {

/// A point of the correspondence curve x(P) = x(Q) in E1 x E2, with its
/// coefficient vectors in the generator bases.
struct TestbedPair {
  LatticeVector v;
  LatticeVector w;
  ECPoint p;
  ECPoint q;
  /// Lies on a declared subgroup translate, so it is not counted.
  bool excluded = false;
};

struct TestbedResult {
  std::vector<TestbedPair> pairs;
  /// Combinations of the two height balls examined.
  std::size_t combinations = 0;
  std::size_t empirical_count = 0;
  /// Block-diagonal Gram matrix of Gamma1 x Gamma2.
  Eigen::MatrixXd gram;
  PipelineReport report;
  ConstantLedger ledger;
  std::vector<std::string> flags;

  nlohmann::ordered_json to_json(const WorkbenchConfig& cfg) const;
};

/// Exact check of the relation, with O related only to O.
bool equal_x(const ECPoint& p, const ECPoint& q);

/// Enumerates v, w with h(v) <= box and h(w) <= box in each curve's lattice,
/// keeps the exact equal-x pairs, filters declared exclusions and runs the
/// counting pipeline on the remaining points of Gamma1 x Gamma2 with the
/// block-diagonal Gram matrix. The ledger takes g = 2, dim X = 1 and the rank
/// of the product from the data; deg X and deg A come from the constants and
/// are flagged as configured placeholders.
///
/// InputError without a testbed section, for curves without generators, or
/// when exclusions are declared for two different curves. ResourceError past
/// max_combinations.
TestbedResult enumerate_testbed(const WorkbenchConfig& cfg);

/// Re-parses a serialised result and re-checks every listed pair exactly:
/// both points on their curves and equal x-coordinates.
bool recheck_testbed_json(const nlohmann::json& j);

}  // namespace mwb
