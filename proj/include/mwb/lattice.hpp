#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mwb/elliptic.hpp"

namespace mwb {

/// Integer coordinates of a lattice element in the generator basis.
using LatticeVector = std::vector<std::int64_t>;

enum class LatticeSource { synthetic, curve_derived };

/// A finite-rank group modulo torsion, carried as its Gram matrix under the
/// Neron-Tate pairing. Entries are floating point with a global tolerance.
class MWLattice {
 public:
  static constexpr double kPsdTolerance = 1e-9;

  MWLattice() = default;
  /// Throws InputError unless gram is square, symmetric and has no
  /// eigenvalue below -kPsdTolerance.
  explicit MWLattice(Eigen::MatrixXd gram, LatticeSource source = LatticeSource::synthetic);

  int rank() const { return static_cast<int>(gram_.rows()); }
  const Eigen::MatrixXd& gram() const { return gram_; }
  LatticeSource source() const { return source_; }
  double min_eigenvalue() const { return min_eig_; }

  /// True when the form is numerically definite, which enumeration and the
  /// Euclidean embedding need.
  bool positive_definite() const;

  /// Upper-triangular R with gram = R^T R, so |v| = |R v|. Throws InputError
  /// for a semidefinite form.
  const Eigen::MatrixXd& euclidean_basis() const;

  /// R v as a real vector.
  Eigen::VectorXd embed(const LatticeVector& v) const;

 private:
  Eigen::MatrixXd gram_;
  LatticeSource source_ = LatticeSource::synthetic;
  double min_eig_ = 0.0;
  Eigen::MatrixXd chol_;  // empty unless definite
};

double height(const MWLattice& lat, const LatticeVector& v);
double pairing(const MWLattice& lat, const LatticeVector& v, const LatticeVector& w);
double norm(const MWLattice& lat, const LatticeVector& v);
/// Clamped to [-1, 1]; throws InputError if either vector has zero norm.
double cosine(const MWLattice& lat, const LatticeVector& v, const LatticeVector& w);

/// Gram matrix of the generators under nt_pairing. An eigenvalue below
/// -10 * tol is reported through `warnings` rather than rejected, as long as
/// it stays within the lattice's own PSD tolerance.
MWLattice lattice_from_curve(const EllipticCurve& curve, const std::vector<ECPoint>& generators,
                             const HeightOptions& opts = {},
                             std::vector<std::string>* warnings = nullptr);

/// Every v with |v| <= radius, in lexicographic order of coordinates.
/// Fincke-Pohst enumeration over the Cholesky factor; a relative slack of
/// 1e-12 keeps boundary points whose norm is exactly the radius.
/// Throws InputError for a semidefinite Gram matrix or negative radius and
/// ResourceError once more than max_points vectors are found.
std::vector<LatticeVector> enumerate_ball(const MWLattice& lat, double radius,
                                          std::size_t max_points = 10'000'000);

}  // namespace mwb
