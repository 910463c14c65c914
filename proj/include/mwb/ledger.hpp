#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwb/rational.hpp"

namespace mwb {

/// A constant that is exact when its derivation stayed inside Q, and
/// otherwise carries only a double (square roots, logs).
struct LedgerValue {
  std::optional<Rational> exact;
  double approx = 0.0;

  static LedgerValue of(const Rational& q) { return {q, to_double(q)}; }
  static LedgerValue real(double x) { return {std::nullopt, x}; }
  bool is_exact() const { return exact.has_value(); }
};

struct LedgerEntry {
  std::string name;
  LedgerValue value;
  /// Where the quantity comes from, e.g. "input", "cone-cover-count",
  /// "vojta-chain-gap". Free text; one tag per derivation rule.
  std::string provenance;
  std::vector<std::string> depends_on;
  /// Set for values the workbench had to choose or reconstruct, as opposed
  /// to values fixed by a stated formula.
  bool flagged = false;
  std::string note;
};

/// Named constants with their derivation DAG. Entries keep insertion order,
/// which is the order the derivation ran in, so serialisation is stable.
class ConstantLedger {
 public:
  void set_input(const std::string& name, const Rational& value, const std::string& note = "");
  void set_input(const std::string& name, double value, const std::string& note = "");

  /// Adds or replaces a derived entry. Every dependency must already exist.
  const LedgerEntry& record(const std::string& name, LedgerValue value, const std::string& provenance,
                            std::vector<std::string> depends_on, const std::string& note = "",
                            bool flagged = false);

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  /// Throws LedgerError when absent.
  const LedgerEntry& at(const std::string& name) const;
  double value(const std::string& name) const { return at(name).value.approx; }
  /// Throws LedgerError when absent or not exact.
  const Rational& exact(const std::string& name) const;
  /// Exact value rounded up to an integer; LedgerError if not exact.
  Integer ceil_integer(const std::string& name) const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }

  /// [{name, value, exact?, provenance, depends_on, flagged?, note?}, ...]
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<LedgerEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

Integer ceil_rational(const Rational& q);
Integer floor_rational(const Rational& q);

/// Smallest integer c >= 0 with c^k >= n (n >= 0, k >= 1).
Integer ceil_root(const Integer& n, unsigned k);

}  // namespace mwb
