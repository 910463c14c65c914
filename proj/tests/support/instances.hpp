#pragma once

// Random inputs for the covering procedures, shared by unit and acceptance
// tests.

#include <random>
#include <vector>

#include "mwb/cover.hpp"

namespace instances {

struct CoverInstance {
  mwb::linear::LinearVarietyModel x{2, 0};
  int m = 1;
  mwb::linear::LinearVarietyModel z{2, 0};
};

/// X a random positive-dimensional subspace of F_q^n (q in {2, 3, 5},
/// n <= 3), M in 1..3 and Z a proper union of a few subspaces of X^M mixing
/// diagonals, coordinate slices, products and random hulls.
CoverInstance random_cover_instance(std::mt19937_64& rng);

/// Distinct subspaces of one dimension in F_q^n.
mwb::linear::SubspaceFamily random_family(std::mt19937_64& rng);

}  // namespace instances
