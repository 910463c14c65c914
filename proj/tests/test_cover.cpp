#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "mwb/cover.hpp"
#include "mwb/degree.hpp"
#include "mwb/errors.hpp"
#include "support/instances.hpp"

using namespace mwb;
using namespace mwb::linear;

namespace {

SubspaceFamily lines_through_origin_f3() {
  SubspaceFamily f;
  for (Vec d : {Vec{0, 1}, Vec{1, 0}, Vec{1, 1}, Vec{1, 2}}) f.members.emplace_back(3, Vec{0, 0}, std::vector<Vec>{d});
  return f;
}

bool subset(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  std::set<Vec> sb(b.begin(), b.end());
  return std::all_of(a.begin(), a.end(), [&](const Vec& p) { return sb.count(p) != 0; });
}

}  // namespace

TEST_CASE("pinning the four lines through the origin of F_3^2") {
  SubspaceFamily f = lines_through_origin_f3();
  for (std::size_t seed = 0; seed < 4; ++seed) {
    PinningResult res = chow_pinning(f, seed);
    REQUIRE(res.points.size() == 1);
    CHECK(res.points[0] != Vec{0, 0});
    CHECK(f.members[seed].contains(res.points[0]));
    CHECK(res.survivors == std::vector<std::size_t>{seed});
    // Exhaustive: every nonzero point of the seed line lies on no other line.
    for (const auto& p : f.members[seed].points()) {
      if (p == Vec{0, 0}) continue;
      CHECK(members_through(f, {p}) == std::vector<std::size_t>{seed});
    }
  }
}

TEST_CASE("pinning trivial and parallel families") {
  SubspaceFamily one{{AffineSubspace(5, {1, 2}, {{1, 0}})}};
  CHECK(chow_pinning(one, 0).points.empty());
  CHECK(chow_pinning(one, 0).survivors == std::vector<std::size_t>{0});

  SubspaceFamily par{{AffineSubspace(3, {0, 0}, {{1, 0}}), AffineSubspace(3, {0, 1}, {{1, 0}})}};
  PinningResult res = chow_pinning(par, 0);
  CHECK(res.points.size() == 1);
  CHECK(res.points[0] == Vec{0, 0});
  CHECK(res.survivors == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(chow_pinning(par, 2), InputError);
}

TEST_CASE("family validation") {
  SubspaceFamily mixed{{AffineSubspace(3, {0, 0}, {{1, 0}}), AffineSubspace(3, {0, 1})}};
  CHECK_THROWS_AS(mixed.validate(), InputError);
  SubspaceFamily dup{{AffineSubspace(3, {0, 0}, {{1, 0}}), AffineSubspace(3, {1, 0}, {{2, 0}})}};
  CHECK_THROWS_AS(dup.validate(), InputError);
  CHECK_THROWS_AS(SubspaceFamily{}.validate(), InputError);
}

TEST_CASE("pinning is a fixpoint on random families") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    SubspaceFamily f = instances::random_family(rng);
    const std::size_t seed = static_cast<std::size_t>(t) % f.members.size();
    PinningResult res = chow_pinning(f, seed);
    CHECK(std::count(res.survivors.begin(), res.survivors.end(), seed) == 1);
    for (const auto& p : res.points) CHECK(f.members[seed].contains(p));
    CHECK(members_through(f, res.points) == res.survivors);
    auto again = res.points;
    again.insert(again.end(), res.points.begin(), res.points.end());
    CHECK(members_through(f, again) == res.survivors);
    CHECK(res.points.size() < f.members.size() + 1);
  }
}

TEST_CASE("covering recursion examples") {
  AffineSubspace line3(3, {0, 0}, {{1, 1}});
  LinearVarietyModel x3(3, 2, {line3});

  SUBCASE("M = 1 returns Z") {
    LinearVarietyModel z(3, 2, {AffineSubspace(3, {1, 1}), AffineSubspace(3, {2, 2})});
    NogaAlonTrace trace;
    LinearVarietyModel xp = nogaalon_cover(x3, 1, z, {{1, 1}}, &trace);
    CHECK(xp.components() == z.components());
    CHECK(trace.cases == std::vector<std::string>{"base"});
  }

  SUBCASE("diagonal in X^2 pins one point") {
    LinearVarietyModel diag(3, 4, {AffineSubspace(3, {0, 0, 0, 0}, {{1, 1, 1, 1}})});
    for (const auto& s : line3.points()) {
      LinearVarietyModel xp = nogaalon_cover(x3, 2, diag, {s});
      CHECK(xp.degree() == 1);
      CHECK(xp.points() == std::vector<Vec>{s});
    }
  }

  SUBCASE("two coordinate lines through a point of the F_5 line") {
    AffineSubspace x5(5, {0}, {{1}});
    LinearVarietyModel x(5, 1, {x5});
    const int a = 2;
    LinearVarietyModel z(5, 2, {AffineSubspace(5, {0, a}, {{1, 0}}), AffineSubspace(5, {a, 0}, {{0, 1}})});
    LinearVarietyModel xp = nogaalon_cover(x, 2, z, {{a}});
    CHECK(xp.points() == std::vector<Vec>{{a}});
    BruteForceCover bf = brute_force_minimal_cover(x, 2, z);
    CHECK(bf.maximal_sigmas == std::vector<std::vector<Vec>>{{{a}}});
  }
}

TEST_CASE("covering recursion input checks") {
  AffineSubspace line(3, {0, 0}, {{1, 1}});
  LinearVarietyModel x(3, 2, {line});
  LinearVarietyModel diag(3, 4, {AffineSubspace(3, {0, 0, 0, 0}, {{1, 1, 1, 1}})});
  CHECK_THROWS_AS(nogaalon_cover(x, 2, diag, {{1, 1}, {2, 2}}), InputError);
  CHECK_THROWS_AS(nogaalon_cover(x, 2, power(x, 2), {{1, 1}}), InputError);
  LinearVarietyModel two(3, 2, {line, AffineSubspace(3, {0, 1}, {{1, 1}})});
  CHECK_THROWS_AS(nogaalon_cover(two, 2, diag, {}), InputError);
  CHECK_THROWS_AS(nogaalon_cover(x, 2, diag, {{0, 1}}), InputError);
}

TEST_CASE("brute force oracle basics") {
  AffineSubspace line(5, {0, 0}, {{1, 3}});
  LinearVarietyModel x(5, 2, {line});
  LinearVarietyModel diag(5, 4, {AffineSubspace(5, {0, 0, 0, 0}, {{1, 3, 1, 3}})});
  BruteForceCover bf = brute_force_minimal_cover(x, 2, diag);
  CHECK(bf.maximal_sigmas.size() == 5);
  for (const auto& s : bf.maximal_sigmas) CHECK(s.size() == 1);
  for (auto c : bf.minimal_cover_sizes) CHECK(c == 1);

  // Removing one point of X^2 leaves a union of points, which the model
  // represents exactly; Sigma may then be any set missing that pair.
  AffineSubspace small(2, {0}, {{1}});
  LinearVarietyModel x2(2, 1, {small});
  std::vector<AffineSubspace> pts;
  for (Vec p : {Vec{0, 0}, Vec{0, 1}, Vec{1, 0}}) pts.emplace_back(2, p);
  LinearVarietyModel z(2, 2, pts);
  BruteForceCover holes = brute_force_minimal_cover(x2, 2, z);
  CHECK(holes.maximal_sigmas == std::vector<std::vector<Vec>>{{{0}}});

  CHECK_THROWS_AS(brute_force_minimal_cover(LinearVarietyModel(5, 4, {AffineSubspace::whole(5, 4)}), 2,
                                            LinearVarietyModel(5, 8)),
                  ResourceError);
}

TEST_CASE("covering recursion agrees with the brute-force oracle") {
  std::mt19937_64 rng(31);
  std::size_t checked = 0;
  for (int t = 0; t < 120; ++t) {
    instances::CoverInstance inst = instances::random_cover_instance(rng);
    BruteForceCover bf = brute_force_minimal_cover(inst.x, inst.m, inst.z);
    const std::size_t size_x = inst.x.points().size();
    const Integer bound = nogaalon_degree_bound(static_cast<unsigned>(inst.m), static_cast<unsigned>(inst.x.dim()),
                                                1, std::max<Integer>(1, inst.z.degree()));
    for (std::size_t i = 0; i < bf.maximal_sigmas.size(); ++i) {
      const auto& sigma = bf.maximal_sigmas[i];
      CHECK(power_inside(sigma, inst.m, inst.z));
      LinearVarietyModel xp = nogaalon_cover(inst.x, inst.m, inst.z, sigma);
      const auto pts = xp.points();
      CHECK(subset(sigma, pts));
      CHECK(subset(pts, inst.x.points()));
      CHECK(pts.size() < size_x);
      CHECK(Integer(xp.degree()) <= bound);
      CHECK(bf.minimal_cover_sizes[i] <= xp.degree());
      ++checked;
    }
  }
  CHECK(checked > 0);
}
