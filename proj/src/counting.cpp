#include "mwb/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mwb/degree.hpp"
#include "mwb/errors.hpp"
#include "mwb/packing.hpp"

namespace mwb {

namespace {

// Arithmetic on possibly-inexact ledger values: exact in, exact out.
LedgerValue lv_add(const LedgerValue& a, const LedgerValue& b) {
  if (a.exact && b.exact) return LedgerValue::of(*a.exact + *b.exact);
  return LedgerValue::real(a.approx + b.approx);
}

LedgerValue lv_mul(const LedgerValue& a, const LedgerValue& b) {
  if (a.exact && b.exact) return LedgerValue::of(*a.exact * *b.exact);
  return LedgerValue::real(a.approx * b.approx);
}

LedgerValue lv_pow(const LedgerValue& a, unsigned k) {
  if (a.exact) return LedgerValue::of(qpow(*a.exact, k));
  return LedgerValue::real(std::pow(a.approx, static_cast<double>(k)));
}

bool lv_le(const LedgerValue& a, const LedgerValue& b) {
  if (a.exact && b.exact) return *a.exact <= *b.exact;
  return a.approx <= b.approx + 1e-12 * std::max(1.0, std::fabs(b.approx));
}

LedgerValue lv_max(const LedgerValue& a, const LedgerValue& b) { return lv_le(a, b) ? b : a; }

LedgerValue lv_count(std::size_t n) { return LedgerValue::of(Rational(static_cast<long long>(n))); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer n = numerator(q);
  Integer d = denominator(q);
  Integer sn = boost::multiprecision::sqrt(n);
  Integer sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

LedgerValue lv_sqrt(const Rational& q) {
  if (auto s = exact_sqrt(q)) return LedgerValue::of(*s);
  return LedgerValue::real(std::sqrt(to_double(q)));
}

/// 1 + 2 sqrt(x) as a ledger value.
LedgerValue packing_radius_ratio(const Rational& x) {
  if (auto s = exact_sqrt(x)) return LedgerValue::of(1 + 2 * *s);
  return LedgerValue::real(1.0 + 2.0 * std::sqrt(to_double(x)));
}

/// Exact test of 1 + 2 sqrt(x) > t.
bool sqrt_term_exceeds(const Rational& x, const Rational& t) {
  if (t < 1) return true;
  Rational u = t - 1;
  return 4 * x > u * u;
}

Integer floor_value(const LedgerValue& v) {
  if (v.exact) return floor_rational(*v.exact);
  if (!std::isfinite(v.approx)) throw ResourceError("count threshold is not finite");
  return Integer(std::floor(v.approx));
}

void require_positive(const Rational& x, const char* name) {
  if (!(x > 0)) throw InputError(std::string(name) + " must be positive, got " + to_string(x));
}

}  // namespace

std::string value_string(const LedgerValue& v) { return v.exact ? to_string(*v.exact) : format_real(v.approx); }

bool IsolationOracle::query(const std::vector<std::size_t>& tuple) const {
  switch (mode) {
    case Mode::always_true:
      return true;
    case Mode::always_false:
      return false;
    case Mode::distinct_points: {
      std::set<std::size_t> seen(tuple.begin(), tuple.end());
      return seen.size() == tuple.size();
    }
    case Mode::table: {
      auto it = table.find(tuple);
      if (it == table.end()) throw InputError("isolation oracle has no entry for the queried tuple");
      return it->second;
    }
  }
  return false;
}

void HeightedPointSet::validate() const {
  std::set<LatticeVector> seen;
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != lattice.rank()) throw InputError("point dimension differs from lattice rank");
    if (!seen.insert(p).second) throw InputError("point set has repeated points");
  }
}

namespace {

void check_indices(const HeightedPointSet& set, const std::vector<std::size_t>& idx) {
  for (std::size_t i : idx) {
    if (i >= set.points.size()) throw InputError("point index " + std::to_string(i) + " out of range");
  }
}

bool angle_ok(const HeightedPointSet& set, std::size_t i, std::size_t j, double c4) {
  double ni = norm(set.lattice, set.points[i]);
  double nj = norm(set.lattice, set.points[j]);
  double rhs = (1.0 - 1.0 / c4) * ni * nj;
  return pairing(set.lattice, set.points[i], set.points[j]) >= rhs - kPredicateSlack * std::fabs(rhs);
}

}  // namespace

bool vojta_hypotheses(const HeightedPointSet& set, const std::vector<std::size_t>& indices, double c4) {
  if (indices.size() != set.dim_x + 1) throw InputError("Vojta chain needs dim X + 1 points");
  check_indices(set, indices);
  for (std::size_t k = 0; k + 1 < indices.size(); ++k) {
    std::size_t i = indices[k];
    std::size_t j = indices[k + 1];
    if (!angle_ok(set, i, j, c4)) return false;
    double ni = norm(set.lattice, set.points[i]);
    double nj = norm(set.lattice, set.points[j]);
    if (nj < c4 * ni * (1.0 - kPredicateSlack)) return false;
  }
  return true;
}

bool mumford_hypotheses(const HeightedPointSet& set, std::size_t i0, const std::vector<std::size_t>& others,
                        double c4) {
  if (others.size() != set.dim_x) throw InputError("Mumford tuple needs dim X further points");
  std::vector<std::size_t> tuple{i0};
  tuple.insert(tuple.end(), others.begin(), others.end());
  check_indices(set, tuple);
  double n0 = norm(set.lattice, set.points[i0]);
  for (std::size_t i : others) {
    if (!angle_ok(set, i0, i, c4)) return false;
    double gap = std::fabs(n0 - norm(set.lattice, set.points[i]));
    if (gap > n0 / c4 * (1.0 + kPredicateSlack)) return false;
  }
  return set.oracle.query(tuple);
}

std::uint64_t gap_exponent(double c4) {
  if (!(c4 > 1)) throw InputError("gap exponent needs c4 > 1");
  const Rational c = rational_from_double(c4);
  const Rational q = 1 + 1 / c;
  long double estimate = std::log(static_cast<long double>(c4)) / std::log1p(1.0L / static_cast<long double>(c4));
  auto m = static_cast<std::uint64_t>(std::max(1.0L, std::ceil(estimate)));
  if (m > 100000) return m;
  auto reaches = [&](std::uint64_t k) { return qpow(q, static_cast<unsigned>(k)) >= c; };
  while (m > 1 && reaches(m - 1)) --m;
  while (!reaches(m)) ++m;
  return m;
}

GapAudit gap_sequence_audit(const HeightedPointSet& set, const std::vector<std::size_t>& cone_points, double c4,
                            std::uint64_t n_prime, unsigned g) {
  if (n_prime < 1) throw InputError("N' must be >= 1");
  check_indices(set, cone_points);
  GapAudit audit;
  audit.M = gap_exponent(c4);
  audit.claimed_max_run = Integer(g) * audit.M * n_prime;

  std::vector<double> norms;
  norms.reserve(cone_points.size());
  for (std::size_t i : cone_points) {
    double n = norm(set.lattice, set.points[i]);
    if (!(n > 0)) throw InputError("gap audit: the origin cannot lie in a cone");
    if (!norms.empty() && n < norms.back() * (1.0 - kPredicateSlack)) {
      throw InputError("gap audit: points are not sorted by norm");
    }
    norms.push_back(n);
  }
  for (std::size_t a = 0; a < cone_points.size(); ++a) {
    for (std::size_t b = a + 1; b < cone_points.size(); ++b) {
      if (!angle_ok(set, cone_points[a], cone_points[b], c4)) {
        throw InputError("gap audit: points do not lie in one cone");
      }
    }
  }

  if (cone_points.empty()) return audit;
  audit.run_length = cone_points.size() - 1;
  audit.run_within_bound = Integer(audit.run_length) < audit.claimed_max_run;
  const double growth = 1.0 + 1.0 / c4;
  for (std::size_t j = 0; j + n_prime < norms.size(); ++j) {
    if (norms[j + n_prime] <= growth * norms[j]) audit.violations.push_back(j);
  }
  return audit;
}

GapSequence make_gap_sequence(double c4, std::uint64_t n_prime, std::size_t blocks,
                              const std::vector<std::size_t>& stalls, std::int64_t start) {
  if (!(c4 > 1)) throw InputError("gap sequence needs c4 > 1");
  if (n_prime < 1) throw InputError("N' must be >= 1");
  const Rational c = rational_from_double(c4);
  const Rational growth = 1 + 1 / c;
  const std::set<std::size_t> stall_set(stalls.begin(), stalls.end());
  // Starting above c4 N' leaves room for a stalled block to fail strictly.
  Integer v = std::max(Integer(start), Integer(ceil_rational(c * n_prime) + 1));
  const Integer limit = Integer(1) << 62;

  GapSequence seq;
  for (std::size_t b = 0; b < blocks; ++b) {
    if (v + n_prime > limit) throw ResourceError("gap sequence multipliers overflow 64 bits");
    for (std::uint64_t i = 0; i < n_prime; ++i) seq.multipliers.push_back((v + i).convert_to<std::int64_t>());
    const bool stalled = stall_set.count(b) != 0;
    if (stalled && b + 1 < blocks) {
      for (std::uint64_t i = 0; i < n_prime; ++i) seq.expected_violations.push_back(b * n_prime + i);
    }
    if (stalled) {
      v += n_prime;
    } else {
      v = ceil_rational(growth * Rational(v) + Rational(Integer(n_prime - 1)) / c) + 1;
    }
  }
  return seq;
}

ConstantLedger build_ledger(const PipelineConstants& in) {
  VarietyInvariants inv{in.g, in.r, in.d, in.l};
  inv.validate();
  if (!(in.c4 > 1)) throw InputError("c4 must exceed 1");
  require_positive(in.c5, "c5");
  require_positive(in.c0, "c0");
  require_positive(in.c_prime, "c_prime");
  require_positive(in.c8, "c8");
  require_positive(in.c9, "c9");
  require_positive(in.c10, "c10");
  if (in.c_induct) require_positive(*in.c_induct, "c_induct");
  if (in.c7) require_positive(*in.c7, "c7");
  if (in.n_prime && *in.n_prime < 1) throw InputError("N' must be >= 1");

  ConstantLedger L;
  L.set_input("g", Rational(in.g));
  L.set_input("r", Rational(in.r), "dim X");
  L.set_input("d", Rational(in.d), "deg X");
  L.set_input("l", Rational(in.l), "deg A");
  L.set_input("rank", Rational(in.rank));
  L.set_input("hFal", in.h_fal, "Faltings height proxy, supplied");
  L.set_input("hX", in.h_x, "height of X, supplied; bounded by the height-removal bound only");
  L.set_input("c4", in.c4, "conditional on base constants");
  L.set_input("c5", in.c5, "conditional on base constants");
  L.set_input("c0", in.c0, "conditional on base constants");
  L.set_input("c_prime", in.c_prime, "conditional on base constants");
  L.set_input("c8", in.c8, "conditional on base constants");
  L.set_input("c9", in.c9, "conditional on base constants");
  L.set_input("c10", in.c10, "conditional on base constants");
  L.set_input("translate_by_p0", Rational(in.translate_by_p0 ? 1 : 0),
              "1: count P - P0 in the hyp-pack ball; 0: count P in X - P0 around 2 P0");
  if (in.c_induct) {
    L.set_input("c_induct", *in.c_induct, "counting constant in lower dimension");
  } else {
    L.record("c_induct", LedgerValue::of(in.c0), "lower-dimension-constant", {"c0"},
             "defaulted to c0 when no lower-dimension constant is supplied", true);
  }

  const Rational hf = std::max(Rational(1), in.h_fal);
  L.record("hFal_floor", LedgerValue::of(hf), "faltings-floor", {"hFal"}, "max{1, hFal}");
  L.record("large_threshold", LedgerValue::of(in.c5 * std::max(hf, in.h_x)), "large-point-threshold",
           {"c5", "hX", "hFal_floor"}, "c5 max{1, h(X), hFal}");
  L.record("c_NT_bound", LedgerValue::of(in.c_prime * hf), "neron-tate-comparison", {"c_prime", "hFal_floor"},
           "c_NT, h1 <= c' max{1, hFal}");

  const double c4 = to_double(in.c4);
  L.record("M", LedgerValue::of(Rational(static_cast<long long>(gap_exponent(c4)))), "gap-exponent", {"c4"},
           "smallest M with (1 + 1/c4)^M >= c4");
  L.record("cone_bound", LedgerValue::of(Rational(cone_count_bound(static_cast<int>(in.rank), c4))),
           "cone-cover-count", {"c4", "rank"}, "floor((1 + sqrt(8 c4))^rank)");

  const Rational c_ind = in.c_induct ? *in.c_induct : in.c0;
  const unsigned e = in.rank + 1;
  if (in.n_prime) {
    L.set_input("Nprime", Rational(*in.n_prime), "gap window, supplied");
  } else {
    Rational np = Rational(ipow(in.d, 2 * in.g)) * qpow(c_ind, e) + 1;
    L.record("Nprime", LedgerValue::of(Rational(ceil_rational(np))), "gap-window", {"d", "g", "c_induct", "rank"},
             "d^(2g) c^(rank+1) + 1 with c the lower-dimension constant", true);
  }
  L.record("run_bound", LedgerValue::of(Rational(in.g) * L.exact("M") * L.exact("Nprime")), "cone-run-length",
           {"g", "M", "Nprime"}, "each cone holds fewer than g M N' large points");
  large_point_bound(L);

  const Integer u0 = in.l / factorial(in.g);
  if (in.c7) {
    L.set_input("c7", *in.c7, "height-removal window constant, supplied");
  } else {
    L.record("c7", LedgerValue::of(Rational(u0 * in.d * in.d) * c_ind), "height-removal-window",
             {"l", "d", "g", "c_induct"}, "l d^2 / g! times the lower-dimension constant", true);
  }
  L.record("height_removal_prefactor", LedgerValue::of(Rational(ipow(Integer(u0 + 1), in.r + 1) * in.d)),
           "height-removal-bound", {"l", "g", "r", "d"}, "(l/g! + 1)^(r+1) d");
  L.record("mumford_alt_degree", LedgerValue::of(Rational(ipow(in.d, in.r) * ipow(in.d, in.r))),
           "mumford-alternative-degree", {"d", "r"},
           "(deg X)^dim X components of degree <= (deg X)^dim X each; the stated bound leaves this implicit", true);
  if (u0 >= 2) {
    L.record("embedding_n", LedgerValue::of(Rational(u0 - 1)), "embedding-dimension", {"l", "g"}, "l/g! - 1");
  }
  if (in.r >= 1) {
    L.record("generated_degree_constant", LedgerValue::of(Rational(generated_subvariety_constant(in.g, in.r, in.d))),
             "generated-subvariety-degree", {"g", "r", "d"},
             "max over k <= g of the k-fold difference-sum degree; proof-derived", true);
  }
  L.record("R", lv_sqrt(2 * in.c9 * hf), "packing-outer-radius", {"c9", "hFal_floor"}, "sqrt(2 c9 max{1, hFal})");
  L.record("R0", lv_sqrt(hf / in.c0), "packing-inner-radius", {"c0", "hFal_floor"}, "sqrt(max{1, hFal} / c0)");
  final_count_certificate(L);
  return L;
}

Integer large_point_bound(ConstantLedger& L) {
  const Rational c4 = L.exact("c4");
  const unsigned rank = L.exact("rank").convert_to<unsigned>();
  if (!L.has("M")) {
    L.record("M", LedgerValue::of(Rational(static_cast<long long>(gap_exponent(to_double(c4))))), "gap-exponent",
             {"c4"});
  }
  const Rational gmn = L.exact("g") * L.exact("M") * L.exact("Nprime");
  Integer bound;
  if (auto s = exact_sqrt(8 * c4)) {
    bound = ceil_rational(qpow(1 + *s, rank) * gmn);
  } else {
    long double f = std::pow(1.0L + std::sqrt(8.0L * static_cast<long double>(to_double(c4))),
                             static_cast<long double>(rank));
    bound = Integer(std::ceil(f * static_cast<long double>(to_double(gmn))));
  }
  L.record("large_point_bound", LedgerValue::of(Rational(bound)), "large-point-count",
           {"c4", "rank", "g", "M", "Nprime"}, "ceil((1 + sqrt(8 c4))^rank g M N')");
  L.record("c6", LedgerValue::of(Rational(ceil_root(bound, rank + 1))), "large-point-constant",
           {"large_point_bound"}, "smallest c6 with c6^(rank+1) >= large_point_bound");
  return bound;
}

double height_X_removal_bound(unsigned g, unsigned r, const Integer& d, const Integer& l, double max_point_height,
                              ConstantLedger* ledger) {
  VarietyInvariants{g, r, d, l}.validate();
  const Integer u0 = l / factorial(g);
  const Integer prefactor = ipow(Integer(u0 + 1), r + 1) * d;
  const double log_term = u0 == 1 ? 0.0 : 3.0 * log_abs(u0);
  const double bound = to_double(Rational(prefactor)) * (max_point_height + log_term);
  if (ledger != nullptr) {
    ledger->record("hX_bound_prefactor", LedgerValue::of(Rational(prefactor)), "height-removal-bound", {},
                   "(l/g! + 1)^(r+1) d");
    ledger->record("hX_bound", LedgerValue::real(bound), "height-removal-bound", {"hX_bound_prefactor"},
                   "prefactor (max h(x) + 3 log(l/g!))");
  }
  return bound;
}

Rational merge_gap_constants(const Rational& c1p, const Rational& c3p, const Rational& c3pp) {
  require_positive(c1p, "c1'");
  require_positive(c3p, "c3'");
  require_positive(c3pp, "c3''");
  const Rational denom = std::max(Rational(1), Rational(2 * c3p / c1p));
  return std::min(Rational(c3pp / denom), Rational(c1p / 2));
}

double merge_gap_constants(double c1p, double c3p, double c3pp) {
  if (!(c1p > 0) || !(c3p > 0) || !(c3pp > 0)) throw InputError("merge constants must be positive");
  return std::min(c3pp / std::max(1.0, 2.0 * c3p / c1p), c1p / 2.0);
}

bool merge_gap_claim_check(double c1p, double c3p, double c3pp, double h_fal, double hhat) {
  const Rational a = rational_from_double(c1p);
  const Rational b = rational_from_double(c3p);
  const Rational c = rational_from_double(c3pp);
  const Rational h = rational_from_double(hhat);
  const Rational m = std::max(Rational(1), rational_from_double(h_fal));
  const Rational c1 = merge_gap_constants(a, b, c);
  const bool premise = h > a * m - b && h > c;
  return !premise || h > c1 * m;
}

FinalCertificate final_count_certificate(const FinalConstants& in) {
  require_positive(in.c0, "c0");
  require_positive(in.c7, "c7");
  require_positive(in.c8, "c8");
  require_positive(in.c9, "c9");
  require_positive(in.c10, "c10");
  const unsigned e = in.rank + 1;
  FinalCertificate out;
  const LedgerValue far = LedgerValue::of(qpow(in.c10, e));
  out.n_second = LedgerValue::of(qpow(in.c7, e) + 1);
  out.small_alternative = lv_add(lv_mul(out.n_second, LedgerValue::of(qpow(8 * in.c8 + 1, in.rank))), far);
  const Rational x = 2 * in.c9 * in.c0;
  const LedgerValue ratio = packing_radius_ratio(x);
  out.packing_branch = lv_add(lv_mul(LedgerValue::of(in.c0), lv_pow(ratio, in.rank)), far);

  const Rational rational_max = std::max({Rational((in.c7 + 1) * (8 * in.c8 + 1)), in.c0, in.c10});
  const LedgerValue top = sqrt_term_exceeds(x, rational_max) ? ratio : LedgerValue::of(rational_max);
  out.c_final = lv_mul(LedgerValue::of(2), top);
  out.bound = lv_pow(out.c_final, e);
  return out;
}

FinalCertificate final_count_certificate(ConstantLedger& L) {
  FinalConstants in;
  in.c0 = L.exact("c0");
  in.c7 = L.exact("c7");
  in.c8 = L.exact("c8");
  in.c9 = L.exact("c9");
  in.c10 = L.exact("c10");
  in.rank = L.exact("rank").convert_to<unsigned>();
  FinalCertificate out = final_count_certificate(in);
  L.record("Nsecond", out.n_second, "height-removal-count", {"c7", "rank"}, "c7^(rank+1) + 1");
  L.record("alt_small_threshold", out.small_alternative, "small-ball-alternative", {"Nsecond", "c8", "c10", "rank"},
           "N'' (8 c8 + 1)^rank + c10^(rank+1)");
  L.record("alt_far_count", LedgerValue::of(qpow(in.c10, in.rank + 1)), "far-point-count", {"c10", "rank"},
           "c10^(rank+1)");
  L.record("packing_branch", out.packing_branch, "packing-branch", {"c0", "c9", "c10", "rank"},
           "c0 (1 + 2 sqrt(2 c9 c0))^rank + c10^(rank+1)");
  L.record("c_final", out.c_final, "final-count-constant", {"c0", "c7", "c8", "c9", "c10"},
           "2 max{(c7+1)(8 c8 + 1), c0, 1 + 2 sqrt(2 c9 c0), c10}");
  L.record("final_bound", out.bound, "final-count-bound", {"c_final", "rank"}, "c_final^(rank+1)");
  return out;
}

ConstantLedger hyp_pack_induction(const InductionInputs& in) {
  if (in.g < 1) throw InputError("g must be >= 1");
  if (in.d < 1) throw InputError("d must be >= 1");
  if (in.dims.size() != in.g) throw LedgerError("induction needs constants for every dimension 1..g");
  require_positive(in.c0_base, "base constant");

  ConstantLedger L;
  L.set_input("g", Rational(in.g));
  L.set_input("d", Rational(in.d));
  L.set_input("rank", Rational(in.rank));
  L.set_input("c0[r=0]", in.c0_base, "points: the base case holds with any constant >= 1");
  L.record("c_thm[r=0]", LedgerValue::of(in.c0_base), "induction-base", {"c0[r=0]"});

  LedgerValue best_lower = LedgerValue::of(in.c0_base);
  std::string best_name = "c_thm[r=0]";
  for (unsigned r = 1; r <= in.g; ++r) {
    const DimensionConstants& dc = in.dims[r - 1];
    const std::string tag = "[r=" + std::to_string(r) + "]";
    auto name = [&](const std::string& base) { return base + tag; };

    if (dc.c1) {
      require_positive(*dc.c1, "c1");
      L.set_input(name("c1"), *dc.c1);
    } else if (dc.c1p && dc.c3p && dc.c3pp) {
      L.set_input(name("c1'"), *dc.c1p);
      L.set_input(name("c3'"), *dc.c3p);
      L.set_input(name("c3''"), *dc.c3pp);
      L.record(name("c1"), LedgerValue::of(merge_gap_constants(*dc.c1p, *dc.c3p, *dc.c3pp)), "small-point-merge",
               {name("c1'"), name("c3'"), name("c3''")}, "min{c3''/max{1, 2c3'/c1'}, c1'/2}");
    } else {
      throw LedgerError("dimension " + std::to_string(r) + ": need c1 or all of c1', c3', c3''");
    }
    require_positive(dc.c2, "c2");
    L.set_input(name("c2"), dc.c2);
    if (dc.c_dagger) {
      require_positive(*dc.c_dagger, "c_dagger");
      L.set_input(name("c_dagger"), *dc.c_dagger, "lower-dimension constant, supplied");
    } else {
      L.record(name("c_dagger"), best_lower, "induction-hypothesis", {best_name},
               "largest counting constant of the lower dimensions");
    }

    const LedgerValue base = lv_max(LedgerValue::of(dc.c2), L.at(name("c_dagger")).value);
    L.record(name("c3"), lv_pow(base, 3), "ueno-component-count", {name("c2"), name("c_dagger")},
             "(max{c2, c_dagger})^3");
    const LedgerValue c0 = lv_max(L.at(name("c1")).value, L.at(name("c3")).value);
    L.record(name("c0"), c0, "hyp-pack-constant", {name("c1"), name("c3")}, "max{c1, c3}");

    FinalCertificate fc;
    if (c0.exact) {
      fc = final_count_certificate(FinalConstants{*c0.exact, dc.c7, dc.c8, dc.c9, dc.c10, in.rank});
    } else {
      // Only the square-root term can make c0 inexact; evaluate in floating point.
      double x = 2.0 * to_double(dc.c9) * c0.approx;
      double top = std::max({to_double((dc.c7 + 1) * (8 * dc.c8 + 1)), c0.approx, 1.0 + 2.0 * std::sqrt(x),
                             to_double(dc.c10)});
      fc.c_final = LedgerValue::real(2.0 * top);
    }
    L.set_input(name("c7"), dc.c7);
    L.set_input(name("c8"), dc.c8);
    L.set_input(name("c9"), dc.c9);
    L.set_input(name("c10"), dc.c10);
    L.record(name("c_final"), fc.c_final, "final-count-constant",
             {name("c0"), name("c7"), name("c8"), name("c9"), name("c10")},
             "2 max{(c7+1)(8 c8 + 1), c0, 1 + 2 sqrt(2 c9 c0), c10}");
    L.record(name("c_thm"), lv_pow(fc.c_final, 2), "generation-reduction", {name("c_final")},
             "squared to absorb the extra rank from translating X into the subvariety it generates");
    if (lv_le(best_lower, L.at(name("c_thm")).value)) {
      best_lower = L.at(name("c_thm")).value;
      best_name = name("c_thm");
    }
  }
  return L;
}

nlohmann::ordered_json PipelineReport::to_json() const {
  nlohmann::ordered_json j;
  j["empirical_count"] = empirical_count;
  j["certified_bound"] = value_string(certified_bound);
  auto steps_json = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json sj;
    sj["name"] = s.name;
    sj["tag"] = s.tag;
    sj["empirical"] = value_string(s.empirical);
    sj["bound"] = value_string(s.bound);
    sj["ok"] = s.ok;
    if (!s.note.empty()) sj["note"] = s.note;
    steps_json.push_back(std::move(sj));
  }
  j["per_step"] = std::move(steps_json);
  j["verdict"] = ok ? "ok" : "certificate-failure";
  return j;
}

namespace {

double dist(const MWLattice& lat, const LatticeVector& a, const LatticeVector& b) {
  LatticeVector diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return norm(lat, diff);
}

}  // namespace

PipelineReport run_pipeline(const HeightedPointSet& set, ConstantLedger& L) {
  set.validate();
  const MWLattice& lat = set.lattice;
  const unsigned rank = L.exact("rank").convert_to<unsigned>();
  if (static_cast<int>(rank) != lat.rank()) throw InputError("ledger rank differs from the lattice rank");
  if (L.has("r") && L.exact("r") != Rational(set.dim_x)) throw InputError("ledger dim X differs from the point set");
  const double c4 = L.value("c4");
  const unsigned g = L.exact("g").convert_to<unsigned>();
  const double hf = L.value("hFal_floor");
  const std::size_t n = set.points.size();

  PipelineReport rep;
  rep.empirical_count = n;
  rep.certified_bound = L.at("final_bound").value;
  auto log_step = [&](std::string name, std::string tag, LedgerValue emp, LedgerValue bound, std::string note = "") {
    bool ok = lv_le(emp, bound);
    rep.ok = rep.ok && ok;
    rep.steps.push_back({std::move(name), std::move(tag), std::move(emp), std::move(bound), ok, std::move(note)});
  };

  // Large points: cone partition, gap audit and Vojta chains per cone.
  const double threshold = L.value("large_threshold");
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    if (height(lat, set.points[i]) >= threshold) large.push_back(i);
  }
  const std::uint64_t n_prime = L.exact("Nprime").convert_to<std::uint64_t>();
  const LedgerValue run_bound = L.at("run_bound").value;
  std::size_t cones_used = 0;
  if (!large.empty() && rank >= 1) {
    ConeCover cover = build_cone_cover(lat, c4);
    std::map<std::uint64_t, std::vector<std::size_t>> by_cone;
    for (std::size_t i : large) by_cone[assign_to_cone(cover, lat, set.points[i])].push_back(i);
    cones_used = by_cone.size();
    const std::uint64_t M = L.exact("M").convert_to<std::uint64_t>();
    for (auto& [cone, members] : by_cone) {
      std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return height(lat, set.points[a]) < height(lat, set.points[b]);
      });
      GapAudit audit = gap_sequence_audit(set, members, c4, n_prime, g);
      const std::string label = "cone " + std::to_string(cone);
      log_step(label + " run", "cone-run-length", lv_count(members.size()), run_bound);
      log_step(label + " gap violations", "cone-gap-growth", lv_count(audit.violations.size()), lv_count(0));
      std::size_t chains = 0;
      const std::uint64_t stride = M * n_prime;
      for (std::size_t start = 0; start + set.dim_x * stride < members.size(); ++start) {
        std::vector<std::size_t> chain;
        for (unsigned k = 0; k <= set.dim_x; ++k) chain.push_back(members[start + k * stride]);
        if (vojta_hypotheses(set, chain, c4)) ++chains;
      }
      log_step(label + " admissible Vojta chains", "vojta-chain", lv_count(chains), lv_count(0),
               "a chain meeting the hypotheses above the threshold contradicts the inequality");
    }
  }
  log_step("cone composition", "cone-cover-count", lv_count(large.size()),
           lv_mul(lv_count(cones_used), run_bound), "sum of per-cone runs");
  log_step("large points", "large-point-count", lv_count(large.size()), L.at("large_point_bound").value);

  // Height-removal window around the first point.
  const LedgerValue n_second = L.at("Nsecond").value;
  const LedgerValue far_count = L.at("alt_far_count").value;
  const Integer window = floor_value(n_second);
  if (Integer(n) >= window + 1 && n > 0) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin() + 1, order.end(), [&](std::size_t a, std::size_t b) {
      return dist(lat, set.points[a], set.points[0]) < dist(lat, set.points[b], set.points[0]);
    });
    double spread = 0.0;
    const std::size_t w = window.convert_to<std::size_t>();
    for (std::size_t k = 1; k <= w; ++k) spread = std::max(spread, std::pow(dist(lat, set.points[order[k]], set.points[0]), 2));
    const double c8 = L.value("c8");
    const double cut = c8 * c8 * spread + L.value("c9") * hf;
    std::size_t beyond = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::pow(dist(lat, set.points[i], set.points[0]), 2) >= cut) ++beyond;
    }
    log_step("height-removal window", "height-removal-count", lv_count(beyond), far_count,
             "points beyond c8^2 max h(P_i - P_0) + c9 max{1, hFal} from P_0");
  }

  // Small-ball alternative.
  const LedgerValue alt_small = L.at("alt_small_threshold").value;
  if (lv_le(lv_count(n), alt_small)) {
    log_step("alternative (i)", "small-ball-alternative", lv_count(n), alt_small);
  } else {
    const Integer k_far = floor_value(far_count);
    double c12 = std::numeric_limits<double>::infinity();
    std::size_t q_best = 0;
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = dist(lat, set.points[i], set.points[q]);
      std::sort(d.begin(), d.end(), std::greater<>());
      double cq = Integer(n) > k_far ? d[k_far.convert_to<std::size_t>()] : 0.0;
      if (cq < c12) {
        c12 = cq;
        q_best = q;
      }
    }
    L.record("c12", LedgerValue::real(c12), "minimal-far-radius", {"alt_far_count"},
             "minimum over the given points Q only", true);
    const double r2 = 2.0 * L.value("c9") * hf;
    std::size_t far = 0;
    std::vector<std::size_t> ball;
    for (std::size_t i = 0; i < n; ++i) {
      double h = std::pow(dist(lat, set.points[i], set.points[q_best]), 2);
      if (h >= r2) ++far;
      if (h <= r2) ball.push_back(i);
    }
    log_step("alternative (ii) far points", "far-point-count", lv_count(far), far_count,
             "Q = point " + std::to_string(q_best));
    log_step("alternative (ii) radius", "minimal-far-radius", LedgerValue::real(c12 * c12), LedgerValue::real(r2),
             "c12^2 <= 2 c9 max{1, hFal}");

    // Packing of the ball around Q by balls of radius R0.
    const double R = L.value("R");
    const double R0 = L.value("R0");
    std::vector<LatticeVector> pts;
    for (std::size_t i : ball) pts.push_back(set.points[i]);
    if (!pts.empty() && lat.positive_definite()) {
      BallCoverCertificate cert = greedy_ball_cover(lat, pts, R, R0, set.points[q_best]);
      log_step("packing balls", "ball-cover-count", lv_count(cert.centers.size()),
               LedgerValue::of(Rational(cert.bound)));
      std::size_t worst = 0;
      const bool body = L.has("translate_by_p0") && L.value("translate_by_p0") != 0.0;
      for (const auto& c : cert.centers) {
        LatticeVector centre = c;
        if (!body) {
          for (auto& x : centre) x *= 2;
        }
        std::size_t inside = 0;
        for (const auto& p : set.points) {
          if (dist(lat, p, centre) <= R0 * (1.0 + 1e-12)) ++inside;
        }
        worst = std::max(worst, inside);
      }
      log_step("hyp-pack ball", "hyp-pack", lv_count(worst), lv_pow(L.at("c0").value, rank + 1),
               body ? "translated points P - P0" : "points P in X - P0, ball about 2 P0");
      log_step("small ball total", "packing-branch", lv_count(ball.size()),
               lv_mul(L.at("c0").value, lv_pow(packing_radius_ratio(2 * L.exact("c9") * L.exact("c0")), rank)));
    }
  }

  log_step("total", "final-count-bound", lv_count(n), rep.certified_bound);
  if (!rep.ok) throw CertificateError("pipeline: an empirical count exceeded its bound", rep.to_json().dump(2));
  return rep;
}

}  // namespace mwb
