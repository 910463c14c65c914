#pragma once

#include <vector>

#include "mwb/rational.hpp"

namespace mwb {

/// (g, r, d, l) = (dim A, dim X, deg X, deg A).
struct VarietyInvariants {
  unsigned g = 1;
  unsigned r = 0;
  Integer d = 1;
  Integer l = 1;

  /// Throws InputError unless g >= 1, r <= g, d >= 1, l >= 1 and g! | l.
  void validate() const;
};

/// deg(Y x Y') = C(dimY + dimY', dimY) degY degY'.
Integer product_degree(unsigned dimY, unsigned dimY2, const Integer& degY, const Integer& degY2);

/// deg(Y + Y') <= 2^(dimY + dimY') C(dimY + dimY', dimY) degY degY'.
Integer minkowski_sum_degree_bound(unsigned dimY, unsigned dimY2, const Integer& degY, const Integer& degY2);

/// Closed form for the degree of a k-fold sum of copies of X - X:
/// 2^((2^(k+1) - 2) r) C(2r, r) prod_{j=2..k} C(jr, 2r) d^(2k).
/// Requires 1 <= k <= g and 1 <= r <= g.
Integer generated_subvariety_bound(unsigned g, unsigned r, const Integer& d, unsigned k);

/// The same quantity obtained by applying minkowski_sum_degree_bound one
/// copy at a time: S_1 = bound(r, r, d, d) and
/// S_k = bound(2r, 2(k-1)r, S_1, S_(k-1)). This is what the sum inequality
/// actually yields step by step; it is larger than the closed form from
/// k = 2 on, because the closed form keeps only one factor deg(X - X) per
/// step where the inequality produces its square.
Integer generated_subvariety_chain_bound(unsigned g, unsigned r, const Integer& d, unsigned k);

/// max over 1 <= k <= g of generated_subvariety_bound.
Integer generated_subvariety_constant(unsigned g, unsigned r, const Integer& d);

/// 2g x 2g antisymmetric integer matrix.
using AlternatingForm = std::vector<std::vector<Integer>>;

struct SymplecticReduction {
  /// d_1 | d_2 | ... | d_g, all positive.
  std::vector<Integer> d_list;
  /// The block form diag([[0, d_i], [-d_i, 0]]) reached by the reduction.
  AlternatingForm normal_form;
};

/// Integral congruence reduction of an alternating form to the standard
/// block-diagonal shape. Throws InputError for non-square, odd-sized,
/// non-antisymmetric or degenerate input.
SymplecticReduction symplectic_normal_form(const AlternatingForm& e);

struct PfaffianData {
  Integer pf;
  Integer h0_dim;
  Integer deg_A;
};

/// pf = prod d_i, h0 = pf, deg A = g! pf.
PfaffianData pfaffian_identities(unsigned g, const std::vector<Integer>& d_list);

/// coefficient * log(argument), with the argument kept exact.
struct LogTerm {
  Rational coefficient = 0;
  Rational argument = 1;
  double value() const;
};

struct IsogenyTransport {
  Integer deg_u0;
  Integer deg_u;
  Integer d_prime_bound;
  LogTerm faltings_shift;
};

/// deg u0 = l/g!, deg u = (l/g!)^(2g-1), d' <= d (l/g!)^(2g-1),
/// Faltings shift <= (1/2) log(l/g!).
IsogenyTransport isogeny_degree_transport(unsigned g, const Integer& d, const Integer& l);

/// n = l/g! - 1, the dimension of the projective space of the embedding.
Integer embedding_dimension(unsigned g, const Integer& l);

/// Degree bound for the proper subvariety X' produced by the covering
/// recursion: c(1) = degZ and
/// c(M) = max(c(M-1) at degZ' = multinom degZ degX^(M-1), degX degZ + degZ)
/// with multinom = ((M-1) dimX)! / (dimX!)^(M-1).
Integer nogaalon_degree_bound(unsigned M, unsigned dimX, const Integer& degX, const Integer& degZ);

}  // namespace mwb
