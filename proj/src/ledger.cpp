#include "mwb/ledger.hpp"

#include "mwb/errors.hpp"

namespace mwb {

Integer floor_rational(const Rational& q) {
  Integer n = numerator(q);
  const Integer& d = denominator(q);
  Integer f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

Integer ceil_rational(const Rational& q) { return -floor_rational(Rational(-q)); }

Integer ceil_root(const Integer& n, unsigned k) {
  if (k == 0) throw InputError("ceil_root: k must be >= 1");
  if (n <= 0) return 0;
  Integer lo = 0;
  Integer hi = 1;
  while (ipow(hi, k) < n) hi <<= 1;
  // Invariant: lo^k < n <= hi^k.
  while (hi - lo > 1) {
    Integer mid = (lo + hi) / 2;
    if (ipow(mid, k) >= n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void ConstantLedger::set_input(const std::string& name, const Rational& value, const std::string& note) {
  record(name, LedgerValue::of(value), "input", {}, note);
}

void ConstantLedger::set_input(const std::string& name, double value, const std::string& note) {
  record(name, LedgerValue::of(rational_from_double(value)), "input", {}, note);
}

const LedgerEntry& ConstantLedger::record(const std::string& name, LedgerValue value,
                                          const std::string& provenance, std::vector<std::string> depends_on,
                                          const std::string& note, bool flagged) {
  for (const auto& dep : depends_on) {
    if (!has(dep)) throw LedgerError("ledger entry '" + name + "' depends on missing '" + dep + "'");
  }
  LedgerEntry entry{name, std::move(value), provenance, std::move(depends_on), flagged, note};
  if (auto it = index_.find(name); it != index_.end()) {
    entries_[it->second] = std::move(entry);
    return entries_[it->second];
  }
  index_[name] = entries_.size();
  entries_.push_back(std::move(entry));
  return entries_.back();
}

const LedgerEntry& ConstantLedger::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw LedgerError("ledger has no entry '" + name + "'");
  return entries_[it->second];
}

const Rational& ConstantLedger::exact(const std::string& name) const {
  const LedgerEntry& e = at(name);
  if (!e.value.exact) throw LedgerError("ledger entry '" + name + "' is not exact");
  return *e.value.exact;
}

Integer ConstantLedger::ceil_integer(const std::string& name) const { return ceil_rational(exact(name)); }

nlohmann::ordered_json ConstantLedger::to_json() const {
  auto out = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["value"] = format_real(e.value.approx);
    if (e.value.exact) j["exact"] = to_string(*e.value.exact);
    j["provenance"] = e.provenance;
    j["depends_on"] = e.depends_on;
    if (e.flagged) j["flagged"] = true;
    if (!e.note.empty()) j["note"] = e.note;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace mwb
