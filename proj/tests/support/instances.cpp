#include "support/instances.hpp"

#include <algorithm>
#include <set>

namespace instances {

using mwb::linear::AffineSubspace;
using mwb::linear::LinearVarietyModel;
using mwb::linear::Vec;

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Vec random_vec(std::mt19937_64& rng, int q, int n) {
  Vec v(static_cast<std::size_t>(n));
  for (int& x : v) x = pick(rng, 0, q - 1);
  return v;
}

Vec random_point(std::mt19937_64& rng, const AffineSubspace& s) {
  Vec p = s.base();
  for (const auto& d : s.basis()) {
    const int t = pick(rng, 0, s.q() - 1);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = (p[k] + t * d[k]) % s.q();
  }
  return p;
}

// A random subspace of s of dimension at most max_dim.
AffineSubspace random_sub(std::mt19937_64& rng, const AffineSubspace& s, int max_dim) {
  std::vector<Vec> pts;
  const int k = pick(rng, 0, std::max(0, max_dim)) + 1;
  for (int i = 0; i < k; ++i) pts.push_back(random_point(rng, s));
  return mwb::linear::affine_hull(s.q(), pts);
}

AffineSubspace product_of(const std::vector<AffineSubspace>& parts) {
  AffineSubspace out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = mwb::linear::product(out, parts[i]);
  return out;
}

}  // namespace

CoverInstance random_cover_instance(std::mt19937_64& rng) {
  static const int fields[] = {2, 3, 5};
  while (true) {
    const int q = fields[pick(rng, 0, 2)];
    const int n = pick(rng, 1, 3);
    std::vector<Vec> dirs;
    const int dim = pick(rng, 1, n);
    for (int i = 0; i < dim; ++i) dirs.push_back(random_vec(rng, q, n));
    AffineSubspace xs(q, random_vec(rng, q, n), dirs);
    if (xs.dim() == 0 || xs.size() > 200) continue;
    const int m = pick(rng, 1, 3);
    std::uint64_t tuples = 1;
    for (int i = 1; i < m; ++i) tuples *= xs.size();
    if (tuples > 20'000) continue;

    const AffineSubspace xm = product_of(std::vector<AffineSubspace>(static_cast<std::size_t>(m), xs));
    std::vector<AffineSubspace> comps;
    const int count = pick(rng, 1, 4);
    for (int c = 0; c < count; ++c) {
      switch (pick(rng, 0, 3)) {
        case 0: {
          // Diagonal of a subspace of X.
          AffineSubspace s = random_sub(rng, xs, xs.dim());
          Vec base;
          for (int i = 0; i < m; ++i) base.insert(base.end(), s.base().begin(), s.base().end());
          std::vector<Vec> diag;
          for (const auto& d : s.basis()) {
            Vec row;
            for (int i = 0; i < m; ++i) row.insert(row.end(), d.begin(), d.end());
            diag.push_back(row);
          }
          comps.emplace_back(q, base, diag);
          break;
        }
        case 1: {
          // A point in one coordinate, X elsewhere.
          std::vector<AffineSubspace> parts(static_cast<std::size_t>(m), xs);
          parts[static_cast<std::size_t>(pick(rng, 0, m - 1))] = AffineSubspace(q, random_point(rng, xs));
          comps.push_back(product_of(parts));
          break;
        }
        case 2: {
          std::vector<AffineSubspace> parts;
          for (int i = 0; i < m; ++i) parts.push_back(random_sub(rng, xs, xs.dim()));
          comps.push_back(product_of(parts));
          break;
        }
        default:
          comps.push_back(random_sub(rng, xm, xm.dim() - 1));
          break;
      }
    }
    LinearVarietyModel z(q, n * m, comps);
    if (z.covers(xm)) continue;
    return {LinearVarietyModel(q, n, {xs}), m, z};
  }
}

mwb::linear::SubspaceFamily random_family(std::mt19937_64& rng) {
  static const int fields[] = {2, 3, 5};
  const int q = fields[pick(rng, 0, 2)];
  const int n = pick(rng, 1, 3);
  const int r = pick(rng, 0, n - 1);
  const int want = pick(rng, 1, 8);
  std::set<AffineSubspace> seen;
  mwb::linear::SubspaceFamily fam;
  for (int attempt = 0; attempt < 200 && static_cast<int>(fam.members.size()) < want; ++attempt) {
    AffineSubspace s = random_sub(rng, AffineSubspace::whole(q, n), r);
    if (s.dim() != r || !seen.insert(s).second) continue;
    fam.members.push_back(s);
  }
  if (fam.members.empty()) {
    std::vector<Vec> axes;
    for (int i = 0; i < r; ++i) {
      Vec e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      axes.push_back(e);
    }
    fam.members.emplace_back(q, Vec(static_cast<std::size_t>(n), 0), axes);
  }
  return fam;
}

}  // namespace instances
