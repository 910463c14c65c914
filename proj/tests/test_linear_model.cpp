#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "mwb/errors.hpp"
#include "mwb/linear_model.hpp"

using namespace mwb;
using namespace mwb::linear;

namespace {

// Every combination base + sum t_i d_i, straight from the definition.
std::set<Vec> span_points(int q, const Vec& base, const std::vector<Vec>& dirs) {
  std::set<Vec> out;
  std::vector<int> t(dirs.size(), 0);
  while (true) {
    Vec p(base);
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = (p[k] + t[i] * dirs[i][k]) % q;
    out.insert(p);
    std::size_t i = 0;
    while (i < t.size() && ++t[i] == q) t[i++] = 0;
    if (i == t.size()) return out;
  }
}

Vec random_vec(std::mt19937_64& rng, int q, int n) {
  std::uniform_int_distribution<int> u(0, q - 1);
  Vec v(static_cast<std::size_t>(n));
  for (int& x : v) x = u(rng);
  return v;
}

AffineSubspace random_subspace(std::mt19937_64& rng, int q, int n) {
  std::uniform_int_distribution<int> dim(0, n);
  std::vector<Vec> dirs;
  const int k = dim(rng);
  for (int i = 0; i < k; ++i) dirs.push_back(random_vec(rng, q, n));
  return AffineSubspace(q, random_vec(rng, q, n), dirs);
}

std::set<Vec> as_set(const std::vector<Vec>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("field checks") {
  CHECK_NOTHROW(check_field(2));
  CHECK_NOTHROW(check_field(251));
  CHECK_THROWS_AS(check_field(4), InputError);
  CHECK_THROWS_AS(check_field(1), InputError);
  CHECK_THROWS_AS(check_field(257), InputError);
}

TEST_CASE("canonical form identifies equal subspaces") {
  AffineSubspace a(5, {1, 2}, {{1, 1}});
  AffineSubspace b(5, {3, 4}, {{2, 2}, {3, 3}});
  CHECK(a == b);
  CHECK(a.dim() == 1);
  CHECK(a.size() == 5);
  CHECK(a.contains(Vec{0, 1}));
  CHECK_FALSE(a.contains(Vec{0, 0}));
  CHECK(AffineSubspace::whole(5, 2).contains(a));
  CHECK(a.points().size() == 5);
  CHECK(AffineSubspace(5, {7, -1}) == AffineSubspace(5, {2, 4}));
  CHECK_THROWS_AS(AffineSubspace(5, {0, 0}, {{1}}), InputError);
}

TEST_CASE("points match the definition on random subspaces") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const int q = t % 2 ? 3 : 5;
    const int n = 1 + t % 3;
    std::vector<Vec> dirs;
    for (int i = 0; i < t % 3; ++i) dirs.push_back(random_vec(rng, q, n));
    Vec base = random_vec(rng, q, n);
    AffineSubspace s(q, base, dirs);
    const auto pts = s.points();
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    CHECK(as_set(pts) == span_points(q, base, dirs));
    CHECK(pts.size() == s.size());
  }
}

TEST_CASE("intersection, product, projection and hull") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const int q = std::vector<int>{2, 3, 5}[t % 3];
    const int n = 1 + t % 3;
    AffineSubspace a = random_subspace(rng, q, n);
    AffineSubspace b = random_subspace(rng, q, n);
    std::set<Vec> common;
    auto pa = as_set(a.points());
    for (const auto& p : b.points()) {
      if (pa.count(p)) common.insert(p);
    }
    auto meet = intersect(a, b);
    if (common.empty()) {
      CHECK_FALSE(meet.has_value());
    } else {
      REQUIRE(meet.has_value());
      CHECK(as_set(meet->points()) == common);
    }

    AffineSubspace ab = product(a, b);
    CHECK(ab.size() == a.size() * b.size());
    CHECK(project(ab, 0, n) == a);
    CHECK(project(ab, n, n) == b);

    auto pts = a.points();
    std::vector<Vec> few(pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), 3));
    AffineSubspace hull = affine_hull(q, few);
    CHECK(a.contains(hull));
    for (const auto& p : few) CHECK(hull.contains(p));
  }
}

TEST_CASE("models are irredundant and serialisable") {
  AffineSubspace line(3, {0, 0}, {{1, 0}});
  AffineSubspace pt(3, {1, 0});
  AffineSubspace other(3, {0, 1}, {{1, 0}});
  LinearVarietyModel m(3, 2, {pt, line, other, line});
  CHECK(m.degree() == 2);
  CHECK(m.dim() == 1);
  CHECK(m.points().size() == 6);
  CHECK(m.contains(Vec{2, 1}));
  CHECK_FALSE(m.contains(Vec{2, 2}));
  CHECK(LinearVarietyModel(3, 2).dim() == -1);

  auto j = nlohmann::json::parse(m.to_json().dump());
  LinearVarietyModel back = LinearVarietyModel::from_json(j);
  CHECK(back.components() == m.components());
  CHECK_THROWS_AS(LinearVarietyModel(3, 3, {line}), InputError);
}

TEST_CASE("covers detects unions that fill a subspace") {
  // The three horizontal lines of F_3^2 cover the plane.
  std::vector<AffineSubspace> rows;
  for (int y = 0; y < 3; ++y) rows.emplace_back(3, Vec{0, y}, std::vector<Vec>{{1, 0}});
  LinearVarietyModel m(3, 2, rows);
  CHECK(m.covers(AffineSubspace::whole(3, 2)));
  rows.pop_back();
  CHECK_FALSE(LinearVarietyModel(3, 2, rows).covers(AffineSubspace::whole(3, 2)));
}

TEST_CASE("covers agrees with point enumeration on near-covering unions") {
  std::mt19937_64 rng(11);
  int covering = 0;
  for (int t = 0; t < 300; ++t) {
    const int q = std::array{2, 3, 5}[t % 3];
    const int n = q == 5 ? 3 : 4 + t % 2;
    // q parallel hyperplanes cover the space; dropping one leaves a hole that
    // random extra components may or may not fill.
    Vec normal = random_vec(rng, q, n);
    normal[static_cast<std::size_t>(t) % static_cast<std::size_t>(n)] = 1;
    std::vector<Vec> dirs;
    for (int i = 0; i < n; ++i) {
      if (i == t % n) continue;
      Vec d(static_cast<std::size_t>(n), 0);
      d[static_cast<std::size_t>(i)] = 1;
      d[static_cast<std::size_t>(t % n)] = (q - normal[static_cast<std::size_t>(i)]) % q;
      dirs.push_back(d);
    }
    std::vector<AffineSubspace> comps;
    const int drop = static_cast<int>(rng() % 2) == 0 ? -1 : static_cast<int>(rng() % static_cast<unsigned>(q));
    for (int b = 0; b < q; ++b) {
      Vec base(static_cast<std::size_t>(n), 0);
      base[static_cast<std::size_t>(t % n)] = b;
      if (b != drop) comps.emplace_back(q, base, dirs);
    }
    for (int i = 0; i < static_cast<int>(rng() % 4); ++i) comps.push_back(random_subspace(rng, q, n));
    if (rng() % 3 == 0) {
      // Fill the hole with its points one by one, except maybe the last.
      Vec base(static_cast<std::size_t>(n), 0);
      base[static_cast<std::size_t>(t % n)] = std::max(drop, 0);
      auto hole = span_points(q, base, dirs);
      const bool skip = rng() % 2 == 0;
      std::size_t i = 0;
      for (const auto& p : hole)
        if (!(skip && ++i == hole.size())) comps.emplace_back(q, p);
    }
    LinearVarietyModel m(q, n, comps);

    std::vector<Vec> unit;
    for (int i = 0; i < n; ++i) {
      Vec d(static_cast<std::size_t>(n), 0);
      d[static_cast<std::size_t>(i)] = 1;
      unit.push_back(d);
    }
    std::set<Vec> covered;
    for (const auto& c : m.components()) {
      auto pts = span_points(q, c.base(), c.basis());
      covered.insert(pts.begin(), pts.end());
    }
    const bool expected = covered.size() == span_points(q, Vec(static_cast<std::size_t>(n), 0), unit).size();
    covering += expected;
    CHECK(m.covers(AffineSubspace::whole(q, n)) == expected);
  }
  CHECK(covering > 50);
  CHECK(covering < 250);
}

TEST_CASE("powers and the Bezout count") {
  AffineSubspace line(5, {0, 0}, {{1, 2}});
  LinearVarietyModel x(5, 2, {line});
  LinearVarietyModel x2 = power(x, 2);
  CHECK(x2.n() == 4);
  CHECK(x2.degree() == 1);
  CHECK(x2.points().size() == 25);
  std::size_t seen = 0;
  for_each_power_point(line, 2, [&](const Vec& p) {
    CHECK(x2.contains(p));
    return ++seen < 1000;
  });
  CHECK(seen == 25);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const int q = t % 2 ? 2 : 3;
    std::vector<AffineSubspace> ca, cb;
    for (int i = 0; i < 1 + t % 3; ++i) ca.push_back(random_subspace(rng, q, 3));
    for (int i = 0; i < 1 + t % 4; ++i) cb.push_back(random_subspace(rng, q, 3));
    LinearVarietyModel a(q, 3, ca), b(q, 3, cb);
    LinearVarietyModel ab = intersect(a, b);
    CHECK(ab.degree() <= a.degree() * b.degree());
    std::set<Vec> common;
    auto pa = as_set(a.points());
    for (const auto& p : b.points()) {
      if (pa.count(p)) common.insert(p);
    }
    CHECK(as_set(ab.points()) == common);
    auto pu = pa;
    for (const auto& p : b.points()) pu.insert(p);
    CHECK(as_set(unite(a, b).points()) == pu);
  }
}
