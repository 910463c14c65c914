#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mwb/lattice.hpp"
#include "mwb/rational.hpp"

namespace mwb {

/// floor((1 + sqrt(8 c4))^rank), exact when 8 c4 is a perfect square.
Integer cone_count_bound(int rank, double c4);

/// A finite family of closed cones around unit axes covering R^rank \ {0}
/// (Euclidean coordinates y = R v of the lattice). Each cone has half-angle
/// theta with sin(theta) = 1/sqrt(2 c4); two vectors in one cone are within
/// 2 theta of each other, so cos >= 1 - 2 sin^2(theta) = 1 - 1/c4.
///
/// The axes are the normalised centres of a grid of m^(rank-1) cells on each
/// of the 2 rank faces of the cube [-1, 1]^rank, with m chosen so that a cell
/// of half-width 1/m has half-diagonal at most sin(theta). Axes are produced
/// on demand, so high ranks cost nothing until queried.
class ConeCover {
 public:
  ConeCover() = default;

  int ambient_rank() const { return rank_; }
  double c4() const { return c4_; }
  /// Cells per coordinate on each face.
  std::uint64_t cells() const { return m_; }
  std::uint64_t count() const { return count_; }
  const Integer& bound() const { return bound_; }
  /// Membership threshold: cos(theta) = sqrt(1 - 1/(2 c4)).
  double min_cosine() const { return min_cos_; }

  /// Unit axis with the given index, 0 <= index < count().
  Eigen::VectorXd axis(std::uint64_t index) const;

  /// Cone containing the nonzero Euclidean vector y. Located analytically
  /// (face of the largest |y_i|, lowest i on ties; then the grid cell), and
  /// re-verified against min_cosine(). If that check fails from rounding, the
  /// remaining axes are scanned in index order when there are at most 10^6 of
  /// them. Throws CertificateError if no cone admits y.
  std::uint64_t assign(const Eigen::VectorXd& y) const;

  friend ConeCover build_cone_cover(const MWLattice& lat, double c4);

 private:
  int rank_ = 0;
  double c4_ = 0.0;
  std::uint64_t m_ = 0;
  std::uint64_t count_ = 0;
  Integer bound_ = 1;
  double min_cos_ = 1.0;
};

/// Throws InputError if c4 <= 1 or the lattice is semidefinite, and
/// CertificateError if the net has more cones than cone_count_bound.
ConeCover build_cone_cover(const MWLattice& lat, double c4);

/// Cone index of a nonzero lattice vector. InputError for v = 0.
std::uint64_t assign_to_cone(const ConeCover& cover, const MWLattice& lat, const LatticeVector& v);

/// floor((1 + 2R/r)^rank) computed exactly from the binary values of R, r.
Integer ball_cover_bound(int rank, double R, double r);

struct BallCoverCertificate {
  /// Indices into the input point list, in selection order.
  std::vector<std::size_t> center_indices;
  std::vector<LatticeVector> centers;
  double R = 0.0;
  double r = 0.0;
  Integer bound = 1;
  /// Smallest distance between two centers (infinity with fewer than two).
  double min_separation = 0.0;
};

/// Farthest-point greedy cover: the first point is the first center, and the
/// next center is always the point farthest from all current centers (lowest
/// index on ties) until every point is within r. The selection order does not
/// depend on r, so shrinking r only extends the center list.
///
/// All points must lie within R of `center` (the origin by default), else
/// InputError. Throws CertificateError if the centers fail to be pairwise
/// more than r apart or exceed ball_cover_bound.
BallCoverCertificate greedy_ball_cover(const MWLattice& lat, const std::vector<LatticeVector>& points,
                                       double R, double r,
                                       const std::optional<LatticeVector>& center = std::nullopt);

}  // namespace mwb
