#pragma once

#include <string>
#include <vector>

#include "mwb/linear_model.hpp"

namespace mwb::linear {

/// Members of common dimension inside one F_q^n, pairwise distinct.
struct SubspaceFamily {
  std::vector<AffineSubspace> members;

  /// InputError if empty, mixed spaces, mixed dimensions or repeated members.
  void validate() const;
};

struct PinningResult {
  /// Chosen points, all on the seed member, in the order picked.
  std::vector<Vec> points;
  /// Indices of members containing every chosen point; always holds the seed.
  std::vector<std::size_t> survivors;
};

/// Members of the family containing every point.
std::vector<std::size_t> members_through(const SubspaceFamily& family, const std::vector<Vec>& points);

/// Picks points on the seed member until it is the only survivor. Each round
/// takes the lexicographically smallest seed point that misses at least one
/// other survivor, so the survivor count strictly drops.
PinningResult chow_pinning(const SubspaceFamily& family, std::size_t seed);

struct NogaAlonTrace {
  /// One entry per recursion level: "base", "fibre", or "slice".
  std::vector<std::string> cases;
  /// Set when the construction had to be replaced because its output
  /// covered X as a point set ("hull" or "points").
  std::string fallback;
};

/// Proper subvariety X' of the irreducible X (one component) containing
/// Sigma, built by the recursion on M: Z splits by whether the first
/// projection of a component is onto X; a point of Sigma outside the
/// fibre-covering set W recurses on the slice {P} x X^(M-1), otherwise X' is
/// the slice of the dominant part at a first non-covered x0 together with
/// the projection of the rest.
///
/// Over a finite field a union of proper subspaces can cover X, which the
/// irreducibility argument excludes. If that happens, each component is
/// shrunk to the affine hull of the Sigma points on it, and failing that X'
/// becomes Sigma itself.
///
/// InputError if X is not a single subspace, Z is not inside X^M, Z covers
/// X^M, or Sigma^M is not inside Z. ResourceError if |X|^(M-1) exceeds 10^6.
LinearVarietyModel nogaalon_cover(const LinearVarietyModel& x, int m, const LinearVarietyModel& z,
                                  const std::vector<Vec>& sigma, NogaAlonTrace* trace = nullptr);

struct BruteForceCover {
  /// Every inclusion-maximal Sigma in X with Sigma^M inside Z, each sorted.
  std::vector<std::vector<Vec>> maximal_sigmas;
  /// For each maximal Sigma, the least number of proper affine subspaces of
  /// X whose union contains it (0 for empty Sigma).
  std::vector<std::size_t> minimal_cover_sizes;
};

/// Exhaustive oracle for nogaalon_cover: depth-first enumeration of the
/// maximal Sigma (the property is inherited by subsets) and exact minimum
/// covers by hyperplanes of X. Needs |X| <= 200 and M <= 3, otherwise
/// ResourceError; also ResourceError past the search budget.
BruteForceCover brute_force_minimal_cover(const LinearVarietyModel& x, int m, const LinearVarietyModel& z);

/// Whether every tuple of sigma^m lies in z.
bool power_inside(const std::vector<Vec>& sigma, int m, const LinearVarietyModel& z);

}  // namespace mwb::linear
