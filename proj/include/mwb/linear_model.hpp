#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

namespace mwb::linear {

/// A vector over F_q with entries in [0, q).
using Vec = std::vector<int>;

/// Throws InputError unless q is a prime below 256.
void check_field(int q);

/// Affine subspace base + span(basis) of F_q^n in canonical form: basis in
/// reduced row echelon form and base zero in every pivot column. Two
/// subspaces are equal as point sets iff their canonical forms agree.
class AffineSubspace {
 public:
  AffineSubspace(int q, Vec base, std::vector<Vec> directions = {});

  static AffineSubspace whole(int q, int n);

  int q() const { return q_; }
  int ambient() const { return static_cast<int>(base_.size()); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const Vec& base() const { return base_; }
  const std::vector<Vec>& basis() const { return basis_; }
  /// q^dim; throws ResourceError past 2^62.
  std::uint64_t size() const;

  bool contains(const Vec& p) const;
  bool contains(const AffineSubspace& other) const;
  /// All points, lexicographically sorted.
  std::vector<Vec> points() const;

  bool operator==(const AffineSubspace& o) const { return q_ == o.q_ && base_ == o.base_ && basis_ == o.basis_; }
  bool operator!=(const AffineSubspace& o) const { return !(*this == o); }
  bool operator<(const AffineSubspace& o) const;

 private:
  int q_;
  Vec base_;
  std::vector<Vec> basis_;
};

std::optional<AffineSubspace> intersect(const AffineSubspace& a, const AffineSubspace& b);
/// a x b inside F_q^(n_a + n_b).
AffineSubspace product(const AffineSubspace& a, const AffineSubspace& b);
/// Image under the coordinate projection onto [begin, begin + count).
AffineSubspace project(const AffineSubspace& a, int begin, int count);
/// Smallest affine subspace containing the points (nonempty list).
AffineSubspace affine_hull(int q, const std::vector<Vec>& points);

/// Finite union of affine subspaces. Components are kept irredundant (none
/// contains another) and sorted. Degree is the number of components, since
/// each affine subspace has degree 1.
class LinearVarietyModel {
 public:
  LinearVarietyModel(int q, int n, std::vector<AffineSubspace> components = {});

  int q() const { return q_; }
  int n() const { return n_; }
  const std::vector<AffineSubspace>& components() const { return components_; }
  bool empty() const { return components_.empty(); }
  /// Max component dimension, -1 when empty.
  int dim() const;
  std::size_t degree() const { return components_.size(); }

  bool contains(const Vec& p) const;
  /// Point-set union, sorted and deduplicated.
  std::vector<Vec> points() const;
  /// Whether every point of s lies in some component.
  bool covers(const AffineSubspace& s) const;

  static LinearVarietyModel from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

 private:
  int q_;
  int n_;
  std::vector<AffineSubspace> components_;
};

/// Pairwise intersections of components; degree <= deg a * deg b.
LinearVarietyModel intersect(const LinearVarietyModel& a, const LinearVarietyModel& b);
LinearVarietyModel unite(const LinearVarietyModel& a, const LinearVarietyModel& b);
/// X^M, one product component per choice of factor components.
LinearVarietyModel power(const LinearVarietyModel& x, int m);

/// Calls f on every point of s^m (concatenated) in lexicographic order until
/// f returns false. Returns whether the scan ran to completion.
template <class F>
bool for_each_power_point(const AffineSubspace& s, int m, F&& f) {
  const std::vector<Vec> pts = s.points();
  if (m <= 0) return f(Vec{});
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  Vec tuple;
  while (true) {
    tuple.clear();
    for (std::size_t i : idx) tuple.insert(tuple.end(), pts[i].begin(), pts[i].end());
    if (!f(tuple)) return false;
    int k = m - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == pts.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return true;
  }
}

}  // namespace mwb::linear
