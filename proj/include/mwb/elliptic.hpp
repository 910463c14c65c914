#pragma once

#include <cstddef>
#include <vector>

#include "mwb/rational.hpp"

namespace mwb {

/// A rational point on a short Weierstrass curve, or the point at infinity.
class ECPoint {
 public:
  /// The identity O.
  ECPoint() = default;
  ECPoint(Rational x, Rational y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  static ECPoint infinity() { return {}; }

  bool is_infinity() const { return infinity_; }
  const Rational& x() const { return x_; }
  const Rational& y() const { return y_; }

  bool operator==(const ECPoint& other) const {
    if (infinity_ || other.infinity_) return infinity_ == other.infinity_;
    return x_ == other.x_ && y_ == other.y_;
  }

 private:
  bool infinity_ = true;
  Rational x_;
  Rational y_;
};

/// y^2 = x^3 + a4 x + a6 over Q. Construction rejects singular curves.
class EllipticCurve {
 public:
  EllipticCurve(Rational a4, Rational a6);

  const Rational& a4() const { return a4_; }
  const Rational& a6() const { return a6_; }

  /// -16 (4 a4^3 + 27 a6^2)
  Rational discriminant() const;

  bool contains(const ECPoint& p) const;

  ECPoint negate(const ECPoint& p) const;
  /// Chord-tangent addition. Throws InputError if either point is off the curve.
  ECPoint add(const ECPoint& p, const ECPoint& q) const;
  ECPoint sub(const ECPoint& p, const ECPoint& q) const;
  ECPoint dbl(const ECPoint& p) const;
  /// [n]P by double-and-add; negative n allowed.
  ECPoint multiply(long n, const ECPoint& p) const;
  /// sum_i coeffs[i] * gens[i]
  ECPoint combination(const std::vector<ECPoint>& gens, const std::vector<std::int64_t>& coeffs) const;

  bool operator==(const EllipticCurve& other) const { return a4_ == other.a4_ && a6_ == other.a6_; }

 private:
  ECPoint add_unchecked(const ECPoint& p, const ECPoint& q) const;

  Rational a4_;
  Rational a6_;
};

/// A height estimate with an explicit error radius.
struct HeightValue {
  double value = 0.0;
  double error_bound = 0.0;
};

struct HeightOptions {
  double tol = 1e-10;
  /// Hard cap on doubling steps.
  unsigned max_doublings = 80;
  /// Budget for the exact state carried through the doublings (bits).
  std::size_t bit_budget = std::size_t{1} << 22;
};

/// log max(|num x|, |den x|); the identity has height 0 by convention.
HeightValue naive_height(const ECPoint& p);

/// Neron-Tate height by the Tate limit h([2^k]P) / 4^k.
///
/// The iterates are not formed from explicit coordinates of [2^k]P (those
/// grow like 4^k digits). Instead x is carried as a projective pair (X : Z)
/// of coprime integers under the quartic doubling map. The archimedean
/// size log max(|X|, |Z|) is tracked in floating point with a running
/// scale, and the common factor removed at each step, which always divides
/// the resultant R of the two doubling forms, is recovered exactly from
/// (X, Z) mod R^(K+1). Each step is therefore exact in its arithmetic part
/// and the value returned is precisely h([2^k]P)/4^k up to float rounding.
///
/// Stops at the first k where successive iterates differ by less than tol
/// and the geometric tail bound 2 * max|h(2Q) - 4h(Q)| / (3 * 4^k) is below
/// tol / 16. error_bound is that tail bound plus rounding slack.
HeightValue canonical_height(const EllipticCurve& curve, const ECPoint& p,
                             const HeightOptions& opts = {});

/// Successive iterates h([2^k]P)/4^k for k = 0..steps, computed by the same
/// streamed recurrence as canonical_height. Exposed so tests can compare the
/// recurrence against explicit doubling.
std::vector<double> tate_iterates(const EllipticCurve& curve, const ECPoint& p, unsigned steps);

/// <P, Q> = (h(P+Q) - h(P) - h(Q)) / 2.
HeightValue nt_pairing(const EllipticCurve& curve, const ECPoint& p, const ECPoint& q,
                       const HeightOptions& opts = {});

struct TorsionOptions {
  unsigned n_max = 16;
  double tau = 1e-8;
  HeightOptions height;
};

/// [n]P = O for some 1 <= n <= n_max, cross-checked against h(P) < tau.
/// Throws DiagnosticError when the two criteria disagree.
bool is_torsion(const EllipticCurve& curve, const ECPoint& p, const TorsionOptions& opts = {});

}  // namespace mwb
