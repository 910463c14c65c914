#include "mwb/degree.hpp"

#include <algorithm>

#include "mwb/errors.hpp"

namespace mwb {

namespace {

void require_positive(const Integer& x, const char* what) {
  if (x < 1) throw InputError(std::string(what) + " must be >= 1");
}

Integer exact_quotient(const Integer& l, unsigned g, const char* context) {
  Integer gf = factorial(g);
  if (l < 1 || l % gf != 0) {
    throw InputError(std::string(context) + ": g! = " + gf.str() + " does not divide l = " + l.str());
  }
  return l / gf;
}

using Matrix = std::vector<std::vector<Integer>>;

// Simultaneous row and column operation e_dst += q e_src, which keeps the
// matrix antisymmetric.
void add_multiple(Matrix& a, std::size_t dst, std::size_t src, const Integer& q) {
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) a[dst][j] += q * a[src][j];
  for (std::size_t i = 0; i < n; ++i) a[i][dst] += q * a[i][src];
}

void swap_basis(Matrix& a, std::size_t i, std::size_t j) {
  if (i == j) return;
  std::swap(a[i], a[j]);
  for (auto& row : a) std::swap(row[i], row[j]);
}

}  // namespace

void VarietyInvariants::validate() const {
  if (g < 1) throw InputError("g must be >= 1");
  if (r > g) throw InputError("dim X exceeds dim A");
  require_positive(d, "deg X");
  exact_quotient(l, g, "deg A");
}

Integer product_degree(unsigned dimY, unsigned dimY2, const Integer& degY, const Integer& degY2) {
  require_positive(degY, "degY");
  require_positive(degY2, "degY2");
  return binomial(dimY + dimY2, dimY) * degY * degY2;
}

Integer minkowski_sum_degree_bound(unsigned dimY, unsigned dimY2, const Integer& degY, const Integer& degY2) {
  return (Integer(1) << (dimY + dimY2)) * product_degree(dimY, dimY2, degY, degY2);
}

Integer generated_subvariety_bound(unsigned g, unsigned r, const Integer& d, unsigned k) {
  if (k < 1 || k > g) throw InputError("generated_subvariety_bound: need 1 <= k <= g");
  if (r < 1 || r > g) throw InputError("generated_subvariety_bound: need 1 <= r <= g");
  require_positive(d, "d");
  unsigned long exponent = ((1UL << (k + 1)) - 2) * r;
  Integer out = Integer(1) << exponent;
  out *= binomial(2 * r, r);
  for (unsigned j = 2; j <= k; ++j) out *= binomial(j * r, 2 * r);
  return out * ipow(d, 2 * k);
}

Integer generated_subvariety_chain_bound(unsigned g, unsigned r, const Integer& d, unsigned k) {
  if (k < 1 || k > g) throw InputError("generated_subvariety_chain_bound: need 1 <= k <= g");
  if (r < 1 || r > g) throw InputError("generated_subvariety_chain_bound: need 1 <= r <= g");
  const Integer diff = minkowski_sum_degree_bound(r, r, d, d);
  Integer acc = diff;
  for (unsigned j = 2; j <= k; ++j) acc = minkowski_sum_degree_bound(2 * r, 2 * (j - 1) * r, diff, acc);
  return acc;
}

Integer generated_subvariety_constant(unsigned g, unsigned r, const Integer& d) {
  Integer best = 0;
  for (unsigned k = 1; k <= g; ++k) best = std::max(best, generated_subvariety_bound(g, r, d, k));
  return best;
}

SymplecticReduction symplectic_normal_form(const AlternatingForm& e) {
  const std::size_t n = e.size();
  if (n == 0 || n % 2 != 0) throw InputError("alternating form must have even positive size");
  for (const auto& row : e) {
    if (row.size() != n) throw InputError("alternating form must be square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i][i] != 0) throw InputError("alternating form has a nonzero diagonal entry");
    for (std::size_t j = 0; j < i; ++j) {
      if (e[i][j] != -e[j][i]) throw InputError("matrix is not antisymmetric");
    }
  }

  Matrix a = e;
  for (std::size_t k = 0; k < n; k += 2) {
    while (true) {
      // Smallest nonzero entry of the trailing block, moved to (k, k+1).
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (a[i][j] != 0 && (pi == n || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == n) throw InputError("alternating form is degenerate");
      swap_basis(a, k, pi);
      swap_basis(a, k + 1, pj == k ? pi : pj);
      if (a[k][k + 1] < 0) swap_basis(a, k, k + 1);
      const Integer p = a[k][k + 1];

      bool remainder = false;
      for (std::size_t l = k + 2; l < n; ++l) {
        // a[k][l] is changed by e_l -= q e_(k+1); a[k+1][l] by e_l += q e_k.
        Integer q = a[k][l] / p;
        if (q != 0) add_multiple(a, l, k + 1, Integer(-q));
        Integer q2 = a[k + 1][l] / p;
        if (q2 != 0) add_multiple(a, l, k, q2);
        if (a[k][l] != 0 || a[k + 1][l] != 0) remainder = true;
      }
      if (remainder) continue;

      // Divisibility: fold a row with an entry not divisible by p into e_k;
      // the next pass then finds a smaller pivot.
      bool folded = false;
      for (std::size_t i = k + 2; i < n && !folded; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (a[i][j] % p != 0) {
            add_multiple(a, k, i, Integer(1));
            folded = true;
            break;
          }
        }
      }
      if (!folded) break;
    }
  }

  SymplecticReduction out;
  for (std::size_t k = 0; k < n; k += 2) out.d_list.push_back(a[k][k + 1]);
  out.normal_form = std::move(a);
  return out;
}

PfaffianData pfaffian_identities(unsigned g, const std::vector<Integer>& d_list) {
  if (d_list.size() != g) throw InputError("polarization type must have g entries");
  Integer pf = 1;
  for (std::size_t i = 0; i < d_list.size(); ++i) {
    require_positive(d_list[i], "d_i");
    if (i > 0 && d_list[i] % d_list[i - 1] != 0) throw InputError("polarization type violates d_i | d_(i+1)");
    pf *= d_list[i];
  }
  return {pf, pf, factorial(g) * pf};
}

double LogTerm::value() const {
  if (coefficient == 0) return 0.0;
  return to_double(coefficient) * log_of(argument);
}

IsogenyTransport isogeny_degree_transport(unsigned g, const Integer& d, const Integer& l) {
  if (g < 1) throw InputError("g must be >= 1");
  require_positive(d, "d");
  Integer u0 = exact_quotient(l, g, "isogeny_degree_transport");
  IsogenyTransport out;
  out.deg_u0 = u0;
  out.deg_u = ipow(u0, 2 * g - 1);
  out.d_prime_bound = d * out.deg_u;
  out.faltings_shift = {u0 == 1 ? Rational(0) : Rational(1, 2), Rational(u0)};
  return out;
}

Integer embedding_dimension(unsigned g, const Integer& l) {
  Integer q = exact_quotient(l, g, "embedding_dimension");
  if (q < 2) throw InputError("l/g! < 2: no projective embedding");
  return q - 1;
}

Integer nogaalon_degree_bound(unsigned M, unsigned dimX, const Integer& degX, const Integer& degZ) {
  if (M < 1) throw InputError("nogaalon_degree_bound: M must be >= 1");
  require_positive(degX, "degX");
  require_positive(degZ, "degZ");
  if (M == 1) return degZ;
  Integer multinom = factorial((M - 1) * dimX) / ipow(factorial(dimX), M - 1);
  Integer slice = multinom * degZ * ipow(degX, M - 1);
  return std::max(nogaalon_degree_bound(M - 1, dimX, degX, slice), Integer(degX * degZ + degZ));
}

}  // namespace mwb
