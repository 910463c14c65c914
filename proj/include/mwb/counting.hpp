#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwb/lattice.hpp"
#include "mwb/ledger.hpp"

namespace mwb {

/// Answers whether a tuple (P_0, ..., P_r) of point indices is isolated in
/// its fibre of the difference map (x_0, ..., x_r) -> (x_i - x_0).
struct IsolationOracle {
  enum class Mode { always_true, always_false, distinct_points, table };
  Mode mode = Mode::distinct_points;
  std::map<std::vector<std::size_t>, bool> table;

  /// InputError in table mode when the tuple was not tabulated.
  bool query(const std::vector<std::size_t>& tuple) const;
};

/// Points of X meeting Gamma, as lattice vectors, plus the isolation data.
struct HeightedPointSet {
  MWLattice lattice;
  std::vector<LatticeVector> points;
  unsigned dim_x = 1;
  IsolationOracle oracle;

  /// InputError on dimension mismatch or repeated points.
  void validate() const;
};

/// Relative slack used by the hypothesis predicates for floating inequalities.
inline constexpr double kPredicateSlack = 1e-12;

/// Chain condition: for consecutive entries of `indices` (length dim_x + 1),
/// <P_i, P_i+1> >= (1 - 1/c4)|P_i||P_i+1| and |P_i+1| >= c4 |P_i|.
bool vojta_hypotheses(const HeightedPointSet& set, const std::vector<std::size_t>& indices, double c4);

/// Near-parallel, near-equal-norm condition around P_i0 for every other
/// index (length dim_x), inclusive at ||P_0| - |P_i|| = |P_0|/c4, and the
/// oracle must affirm isolation of (i0, others...).
bool mumford_hypotheses(const HeightedPointSet& set, std::size_t i0, const std::vector<std::size_t>& others,
                        double c4);

/// Smallest integer M with (1 + 1/c4)^M >= c4. Exact for M up to 10^5.
std::uint64_t gap_exponent(double c4);

struct GapAudit {
  std::uint64_t M = 0;
  /// g M N'
  Integer claimed_max_run = 0;
  /// N, the last index of the run (points - 1).
  std::size_t run_length = 0;
  bool run_within_bound = true;
  /// Indices j with |P_(j+N')| <= (1 + 1/c4)|P_j|.
  std::vector<std::size_t> violations;
};

/// Audits the geometric growth of a norm-sorted run inside one cone.
/// `cone_points` indexes set.points. Throws InputError if the run is not
/// sorted by norm, contains the origin, or has a pair violating the cone
/// condition <P, Q> >= (1 - 1/c4)|P||Q|.
GapAudit gap_sequence_audit(const HeightedPointSet& set, const std::vector<std::size_t>& cone_points, double c4,
                            std::uint64_t n_prime, unsigned g);

/// Synthetic norm sequences along a fixed direction: `blocks` blocks of
/// n_prime consecutive integer multiples. Between blocks the multiplier
/// jumps just enough to satisfy the growth condition, except after a block
/// listed in `stalls`, where it only advances by n_prime so that every index
/// of that block violates it.
struct GapSequence {
  std::vector<std::int64_t> multipliers;
  std::vector<std::size_t> expected_violations;
};
GapSequence make_gap_sequence(double c4, std::uint64_t n_prime, std::size_t blocks,
                              const std::vector<std::size_t>& stalls = {}, std::int64_t start = 0);

/// Inputs of the constant ledger. Rationals so that ledgers recompute
/// bit-exactly from a config.
struct PipelineConstants {
  unsigned g = 1;
  unsigned r = 1;
  Integer d = 1;
  Integer l = 1;
  unsigned rank = 0;
  Rational h_fal = 0;  // proxy, never computed
  Rational h_x = 0;    // proxy for h(X), only bounded by the workbench
  Rational c4 = 100;
  Rational c5 = 1000000;
  Rational c0 = 1000;
  Rational c_prime = 1000;
  /// Constant of the counting statement in lower dimension; defaults to c0.
  std::optional<Rational> c_induct;
  /// Overrides for the gap window N' and the window constant c7.
  std::optional<Integer> n_prime;
  std::optional<Rational> c7;
  Rational c8 = 1;
  Rational c9 = 1;
  Rational c10 = 1;
  /// Count the translated points P - P0 (ball around P0) instead of the
  /// literal reading where P itself ranges over X - P0 (ball around 2 P0).
  bool translate_by_p0 = false;
};

/// Derives every constant of the large-point / height-removal / packing
/// argument into a ledger. Throws InputError for out-of-range inputs
/// (c0 <= 0, c4 <= 1, ...).
ConstantLedger build_ledger(const PipelineConstants& in);

/// ceil((1 + sqrt(8 c4))^rank g M N'), recorded together with
/// c6 = ceil((rank + 1)-th root). Needs c4, g, rank and N' in the ledger.
Integer large_point_bound(ConstantLedger& ledger);

/// (l/g! + 1)^(r+1) d (max h + 3 log(l/g!)).
double height_X_removal_bound(unsigned g, unsigned r, const Integer& d, const Integer& l, double max_point_height,
                              ConstantLedger* ledger = nullptr);

/// c1 = min{c3'' / max{1, 2 c3'/c1'}, c1'/2}.
Rational merge_gap_constants(const Rational& c1p, const Rational& c3p, const Rational& c3pp);
double merge_gap_constants(double c1p, double c3p, double c3pp);

/// The claim behind the merge, checked exactly on one instance: if
/// hhat > c1' max{1, hFal} - c3' and hhat > c3'' then hhat > c1 max{1, hFal}.
/// Returns whether the implication holds (vacuously true if a premise fails).
bool merge_gap_claim_check(double c1p, double c3p, double c3pp, double h_fal, double hhat);

struct FinalConstants {
  Rational c0 = 1;
  Rational c7 = 1;
  Rational c8 = 1;
  Rational c9 = 1;
  Rational c10 = 1;
  unsigned rank = 0;
};

struct FinalCertificate {
  LedgerValue n_second;           // c7^(rank+1) + 1
  LedgerValue small_alternative;  // N''(8 c8 + 1)^rank + c10^(rank+1)
  LedgerValue packing_branch;     // c0 (1 + 2 sqrt(2 c9 c0))^rank + c10^(rank+1)
  LedgerValue c_final;            // 2 max{(c7+1)(8c8+1), c0, 1 + 2 sqrt(2 c9 c0), c10}
  LedgerValue bound;              // c_final^(rank+1)
};

/// Exact whenever the square root term does not strictly dominate (or is
/// itself rational).
FinalCertificate final_count_certificate(const FinalConstants& in);
/// Same, reading c0, c7..c10 and rank from the ledger and recording results.
FinalCertificate final_count_certificate(ConstantLedger& ledger);

/// Per-dimension data for the induction on dim X.
struct DimensionConstants {
  /// c1 directly, or the three constants it is merged from.
  std::optional<Rational> c1;
  std::optional<Rational> c1p, c3p, c3pp;
  Rational c2 = 1;
  /// Constant of the statement for lower dimensions; derived if absent.
  std::optional<Rational> c_dagger;
  Rational c7 = 1, c8 = 1, c9 = 1, c10 = 1;
};

struct InductionInputs {
  unsigned g = 1;
  Integer d = 1;
  unsigned rank = 0;
  Rational c0_base = 1;
  /// Entry i holds the constants for dim X = i + 1; size must be g.
  std::vector<DimensionConstants> dims;
};

/// Runs c3 = (max{c2, c_dagger})^3, c0 = max{c1, c3} for dim X = 1..g. Each
/// dimension's counting constant is the squared final constant built from its
/// c0, and c_dagger defaults to the largest such constant below.
ConstantLedger hyp_pack_induction(const InductionInputs& in);

struct StepRecord {
  std::string name;
  std::string tag;
  LedgerValue empirical;
  LedgerValue bound;
  bool ok = true;
  std::string note;
};

struct PipelineReport {
  std::size_t empirical_count = 0;
  LedgerValue certified_bound;
  std::vector<StepRecord> steps;
  bool ok = true;

  nlohmann::ordered_json to_json() const;
};

/// Runs the four counting steps on concrete data: large points through the
/// cone cover and per-cone gap audits, the height-removal window, the
/// small-ball alternative with its minimal radius c12 (searched over the
/// given points only), and the final packing. Throws CertificateError,
/// carrying the serialised report, if any empirical count exceeds its bound.
PipelineReport run_pipeline(const HeightedPointSet& set, ConstantLedger& ledger);

/// Serialises a ledger value as its exact string when available.
std::string value_string(const LedgerValue& v);

}  // namespace mwb
