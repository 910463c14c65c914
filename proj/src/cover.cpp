#include "mwb/cover.hpp"

#include <algorithm>
#include <bitset>
#include <set>
#include <unordered_map>

#include "mwb/errors.hpp"

namespace mwb::linear {

void SubspaceFamily::validate() const {
  if (members.empty()) throw InputError("subspace family is empty");
  const AffineSubspace& first = members.front();
  std::set<AffineSubspace> seen;
  for (const auto& m : members) {
    if (m.q() != first.q() || m.ambient() != first.ambient()) throw InputError("family members live in different spaces");
    if (m.dim() != first.dim()) throw InputError("family members differ in dimension");
    if (!seen.insert(m).second) throw InputError("family has repeated members");
  }
}

std::vector<std::size_t> members_through(const SubspaceFamily& family, const std::vector<Vec>& points) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto& m = family.members[i];
    if (std::all_of(points.begin(), points.end(), [&](const Vec& p) { return m.contains(p); })) out.push_back(i);
  }
  return out;
}

PinningResult chow_pinning(const SubspaceFamily& family, std::size_t seed) {
  family.validate();
  if (seed >= family.members.size()) throw InputError("seed index out of range");
  const AffineSubspace& x0 = family.members[seed];
  const std::vector<Vec> candidates = x0.points();
  PinningResult out;
  out.survivors = members_through(family, {});
  while (out.survivors.size() > 1) {
    // Equal dimension and distinct, so no other member contains x0 and a
    // separating point always exists.
    auto separates = [&](const Vec& p) {
      return std::any_of(out.survivors.begin(), out.survivors.end(),
                         [&](std::size_t s) { return s != seed && !family.members[s].contains(p); });
    };
    auto it = std::find_if(candidates.begin(), candidates.end(), separates);
    out.points.push_back(*it);
    out.survivors = members_through(family, out.points);
  }
  return out;
}

bool power_inside(const std::vector<Vec>& sigma, int m, const LinearVarietyModel& z) {
  if (sigma.empty()) return true;
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  Vec tuple;
  while (true) {
    tuple.clear();
    for (std::size_t i : idx) tuple.insert(tuple.end(), sigma[i].begin(), sigma[i].end());
    if (!z.contains(tuple)) return false;
    int k = m - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == sigma.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return true;
  }
}

namespace {

AffineSubspace power_of(const AffineSubspace& x, int m) {
  AffineSubspace acc = x;
  for (int k = 1; k < m; ++k) acc = product(acc, x);
  return acc;
}

/// Rejects anything the recursion cannot work with; returns the single
/// component of X.
AffineSubspace validate_instance(const LinearVarietyModel& x, int m, const LinearVarietyModel& z) {
  if (x.degree() != 1) throw InputError("X must be irreducible (a single affine subspace)");
  if (m < 1) throw InputError("M must be >= 1");
  if (z.q() != x.q() || z.n() != x.n() * m) throw InputError("Z must live in the ambient space of X^M");
  const AffineSubspace& xs = x.components().front();
  const AffineSubspace xm = power_of(xs, m);
  for (const auto& c : z.components()) {
    if (!xm.contains(c)) throw InputError("Z is not contained in X^M");
  }
  return xs;
}

struct Recursion {
  int q;
  int n;
  const std::vector<Vec>& sigma;
  NogaAlonTrace* trace;

  void note(const char* c) const {
    if (trace) trace->cases.emplace_back(c);
  }

  std::vector<AffineSubspace> run(const AffineSubspace& x, int m, const std::vector<AffineSubspace>& z) const {
    if (m == 1) {
      note("base");
      return z;
    }
    const AffineSubspace rest = power_of(x, m - 1);
    std::vector<AffineSubspace> dominant, other;
    for (const auto& y : z) (project(y, 0, n) == x ? dominant : other).push_back(y);

    std::set<Vec> sigma2;
    if (!sigma.empty() && !other.empty()) {
      const LinearVarietyModel z2(q, n * m, other);
      std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
      Vec tuple;
      for (bool more = true; more;) {
        tuple.clear();
        for (std::size_t i : idx) tuple.insert(tuple.end(), sigma[i].begin(), sigma[i].end());
        if (z2.contains(tuple)) sigma2.insert(sigma[idx[0]]);
        int k = m - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == sigma.size()) idx[static_cast<std::size_t>(k--)] = 0;
        more = k >= 0;
      }
    }

    // Fibre of the dominant part over P, as a model in X^(M-1).
    auto fibre = [&](const Vec& p) {
      const AffineSubspace line = product(AffineSubspace(q, p), rest);
      std::vector<AffineSubspace> out;
      for (const auto& y : dominant) {
        if (auto s = intersect(y, line)) out.push_back(project(*s, n, n * (m - 1)));
      }
      return LinearVarietyModel(q, n * (m - 1), std::move(out));
    };
    std::vector<Vec> outside(sigma.begin(), sigma.end());
    std::sort(outside.begin(), outside.end());
    for (const auto& p : outside) {
      if (sigma2.count(p)) continue;
      LinearVarietyModel z1 = fibre(p);
      if (!z1.covers(rest)) {
        note("fibre");
        return run(x, m - 1, z1.components());
      }
    }

    note("slice");
    std::vector<AffineSubspace> projected;
    for (const auto& y : other) projected.push_back(project(y, 0, n));
    std::vector<AffineSubspace> first_choice;
    bool have_first = false;
    std::vector<AffineSubspace> found;
    bool ok = false;
    for_each_power_point(x, m - 1, [&](const Vec& x0) {
      const AffineSubspace slab = product(x, AffineSubspace(q, x0));
      std::vector<AffineSubspace> cut;
      for (const auto& y : dominant) {
        if (auto s = intersect(y, slab)) cut.push_back(project(*s, 0, n));
      }
      if (LinearVarietyModel(q, n, cut).covers(x)) return true;
      cut.insert(cut.end(), projected.begin(), projected.end());
      if (!have_first) {
        first_choice = cut;
        have_first = true;
      }
      if (LinearVarietyModel(q, n, cut).covers(x)) return true;
      found = std::move(cut);
      ok = true;
      return false;
    });
    if (ok) return found;
    return fallback(x, first_choice);
  }

  std::vector<AffineSubspace> fallback(const AffineSubspace& x, const std::vector<AffineSubspace>& cover) const {
    std::vector<AffineSubspace> hulls;
    for (const auto& c : cover) {
      std::vector<Vec> on;
      for (const auto& s : sigma) {
        if (c.contains(s)) on.push_back(s);
      }
      if (!on.empty()) hulls.push_back(affine_hull(q, on));
    }
    if (!LinearVarietyModel(q, n, hulls).covers(x)) {
      if (trace) trace->fallback = "hull";
      return hulls;
    }
    if (trace) trace->fallback = "points";
    std::vector<AffineSubspace> pts;
    for (const auto& s : sigma) pts.emplace_back(q, s);
    return pts;
  }
};

}  // namespace

LinearVarietyModel nogaalon_cover(const LinearVarietyModel& x, int m, const LinearVarietyModel& z,
                                  const std::vector<Vec>& sigma, NogaAlonTrace* trace) {
  const AffineSubspace xs = validate_instance(x, m, z);
  long double work = 1;
  for (int k = 1; k < m; ++k) work *= static_cast<long double>(xs.size());
  if (work > 1e6L) throw ResourceError("|X|^(M-1) exceeds 10^6");
  if (z.covers(power_of(xs, m))) throw InputError("Z must be a proper subset of X^M");
  for (const auto& s : sigma) {
    if (!xs.contains(s)) throw InputError("Sigma has a point outside X");
  }
  if (!power_inside(sigma, m, z)) throw InputError("Sigma^M is not contained in Z");

  std::vector<Vec> unique_sigma(sigma.begin(), sigma.end());
  std::sort(unique_sigma.begin(), unique_sigma.end());
  unique_sigma.erase(std::unique(unique_sigma.begin(), unique_sigma.end()), unique_sigma.end());
  if (trace) *trace = {};
  Recursion rec{x.q(), x.n(), unique_sigma, trace};
  return LinearVarietyModel(x.q(), x.n(), rec.run(xs, m, z.components()));
}

namespace {

constexpr std::size_t kMaxPoints = 200;
constexpr std::uint64_t kSearchBudget = 20'000'000;

using PointSet = std::bitset<kMaxPoints>;

class SigmaSearch {
 public:
  SigmaSearch(const std::vector<Vec>& pts, int m, const LinearVarietyModel& z) : pts_(pts), m_(m), z_(z) {}

  std::vector<std::vector<std::size_t>> run() {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (in_z(std::vector<std::size_t>(static_cast<std::size_t>(m_), i))) cand.push_back(i);
    }
    cand_ = cand;
    std::vector<std::size_t> current;
    dfs(current, 0);
    return std::move(found_);
  }

 private:
  bool in_z(const std::vector<std::size_t>& idx) {
    std::uint64_t key = 0;
    for (std::size_t i : idx) key = key * kMaxPoints + i;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Vec tuple;
    for (std::size_t i : idx) tuple.insert(tuple.end(), pts_[i].begin(), pts_[i].end());
    bool v = z_.contains(tuple);
    cache_.emplace(key, v);
    return v;
  }

  /// Every tuple over current + {c} that uses c lies in Z.
  bool compatible(const std::vector<std::size_t>& current, std::size_t c) {
    std::vector<std::size_t> pool = current;
    pool.push_back(c);
    std::vector<std::size_t> idx(static_cast<std::size_t>(m_), 0);
    std::vector<std::size_t> tuple(static_cast<std::size_t>(m_));
    while (true) {
      bool uses_c = false;
      for (int k = 0; k < m_; ++k) {
        tuple[static_cast<std::size_t>(k)] = pool[idx[static_cast<std::size_t>(k)]];
        uses_c = uses_c || idx[static_cast<std::size_t>(k)] + 1 == pool.size();
      }
      if (uses_c && !in_z(tuple)) return false;
      int k = m_ - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == pool.size()) idx[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) return true;
    }
  }

  void dfs(std::vector<std::size_t>& current, std::size_t from) {
    if (++nodes_ > kSearchBudget) throw ResourceError("maximal Sigma search exceeded its budget");
    bool extended = false;
    for (std::size_t k = from; k < cand_.size(); ++k) {
      if (!compatible(current, cand_[k])) continue;
      extended = true;
      current.push_back(cand_[k]);
      dfs(current, k + 1);
      current.pop_back();
    }
    if (extended) return;
    for (std::size_t k = 0; k < from; ++k) {
      if (std::find(current.begin(), current.end(), cand_[k]) == current.end() && compatible(current, cand_[k])) return;
    }
    found_.push_back(current);
  }

  const std::vector<Vec>& pts_;
  int m_;
  const LinearVarietyModel& z_;
  std::vector<std::size_t> cand_;
  std::unordered_map<std::uint64_t, bool> cache_;
  std::vector<std::vector<std::size_t>> found_;
  std::uint64_t nodes_ = 0;
};

/// Membership masks of every affine hyperplane of X over the points of X.
std::vector<PointSet> hyperplane_masks(const AffineSubspace& x, const std::vector<Vec>& pts) {
  const int k = x.dim();
  const int q = x.q();
  // Coordinates of each point in the echelon basis: the pivot entries.
  std::vector<std::size_t> pivot;
  for (const auto& row : x.basis()) pivot.push_back(static_cast<std::size_t>(std::find_if(row.begin(), row.end(), [](int v) { return v != 0; }) - row.begin()));
  std::vector<Vec> coords;
  for (const auto& p : pts) {
    Vec t;
    for (std::size_t r = 0; r < pivot.size(); ++r) t.push_back(((p[pivot[r]] - x.base()[pivot[r]]) % q + q) % q);
    coords.push_back(std::move(t));
  }
  std::vector<PointSet> masks;
  // Normal vectors with leading entry 1, one per hyperplane direction.
  Vec a(static_cast<std::size_t>(k), 0);
  while (true) {
    std::size_t k2 = 0;
    while (k2 < a.size() && ++a[k2] == q) a[k2++] = 0;
    if (k2 == a.size()) break;
    auto lead = std::find_if(a.begin(), a.end(), [](int v) { return v != 0; });
    if (lead == a.end() || *lead != 1) continue;
    for (int b = 0; b < q; ++b) {
      PointSet mask;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        long long s = 0;
        for (int j = 0; j < k; ++j) s += static_cast<long long>(a[static_cast<std::size_t>(j)]) * coords[i][static_cast<std::size_t>(j)];
        if (s % q == b) mask.set(i);
      }
      masks.push_back(mask);
    }
  }
  return masks;
}

bool cover_within(const PointSet& uncovered, const std::vector<PointSet>& masks, std::size_t depth,
                  std::uint64_t& nodes) {
  if (uncovered.none()) return true;
  if (depth == 0) return false;
  if (++nodes > kSearchBudget) throw ResourceError("minimal cover search exceeded its budget");
  std::size_t first = 0;
  while (!uncovered.test(first)) ++first;
  for (const auto& m : masks) {
    if (m.test(first) && cover_within(uncovered & ~m, masks, depth - 1, nodes)) return true;
  }
  return false;
}

}  // namespace

BruteForceCover brute_force_minimal_cover(const LinearVarietyModel& x, int m, const LinearVarietyModel& z) {
  const AffineSubspace xs = validate_instance(x, m, z);
  if (m > 3) throw ResourceError("brute force cover supports M <= 3");
  if (xs.size() > kMaxPoints) throw ResourceError("brute force cover supports |X| <= 200");
  const std::vector<Vec> pts = xs.points();

  BruteForceCover out;
  SigmaSearch search(pts, m, z);
  const std::vector<PointSet> masks = hyperplane_masks(xs, pts);
  std::uint64_t nodes = 0;
  for (const auto& idx : search.run()) {
    std::vector<Vec> sigma;
    PointSet mask;
    for (std::size_t i : idx) {
      sigma.push_back(pts[i]);
      mask.set(i);
    }
    std::size_t best = 0;
    if (!sigma.empty()) {
      // Every proper subspace lies in a hyperplane and q parallel ones cover X.
      best = 1;
      while (!cover_within(mask, masks, best, nodes)) ++best;
    }
    out.maximal_sigmas.push_back(std::move(sigma));
    out.minimal_cover_sizes.push_back(best);
  }
  return out;
}

}  // namespace mwb::linear
