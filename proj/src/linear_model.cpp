#include "mwb/linear_model.hpp"

#include <algorithm>
#include <set>

#include "mwb/errors.hpp"

namespace mwb::linear {

namespace {

using Matrix = std::vector<Vec>;

int md(long long x, int q) {
  long long r = x % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int inverse(int a, int q) {
  // Fermat, q prime.
  long long result = 1, base = a, e = q - 2;
  while (e > 0) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return static_cast<int>(result);
}

/// In-place reduced row echelon form over the first `cols` columns; zero
/// rows are dropped. Returns the pivot columns.
std::vector<int> rref(Matrix& m, int q, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const int inv = inverse(m[row][c], q);
    for (auto& x : m[row]) x = md(static_cast<long long>(x) * inv, q);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c] == 0) continue;
      const int f = m[i][c];
      for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] = md(m[i][j] - static_cast<long long>(f) * m[row][j], q);
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

/// Basis of {x : m x = 0} in F_q^cols.
Matrix nullspace(Matrix m, int q, int cols) {
  std::vector<int> pivots = rref(m, q, cols);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  Matrix out;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    Vec v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[static_cast<std::size_t>(pivots[r])] = md(-m[r][f], q);
    out.push_back(std::move(v));
  }
  return out;
}

/// A particular solution of a x = b, or nullopt if inconsistent.
std::optional<Vec> solve(const Matrix& a, const Vec& b, int q, int cols) {
  Matrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<int> pivots = rref(aug, q, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  Vec x(static_cast<std::size_t>(cols), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[static_cast<std::size_t>(pivots[r])] = aug[r][cols];
  return x;
}

int dot(const Vec& a, const Vec& b, int q) {
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return md(s, q);
}

}  // namespace

void check_field(int q) {
  if (q < 2 || q > 255) throw InputError("field size must be a prime below 256");
  for (int p = 2; p * p <= q; ++p) {
    if (q % p == 0) throw InputError("field size " + std::to_string(q) + " is not prime");
  }
}

AffineSubspace::AffineSubspace(int q, Vec base, std::vector<Vec> directions)
    : q_(q), base_(std::move(base)), basis_(std::move(directions)) {
  check_field(q_);
  const int n = ambient();
  for (auto& x : base_) x = md(x, q_);
  for (auto& row : basis_) {
    if (static_cast<int>(row.size()) != n) throw InputError("direction length differs from base point length");
    for (auto& x : row) x = md(x, q_);
  }
  std::vector<int> pivots = rref(basis_, q_, n);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    const int f = base_[static_cast<std::size_t>(pivots[r])];
    if (f == 0) continue;
    for (int j = 0; j < n; ++j) {
      base_[static_cast<std::size_t>(j)] = md(base_[static_cast<std::size_t>(j)] - static_cast<long long>(f) * basis_[r][static_cast<std::size_t>(j)], q_);
    }
  }
}

AffineSubspace AffineSubspace::whole(int q, int n) {
  std::vector<Vec> e;
  for (int i = 0; i < n; ++i) {
    Vec v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(i)] = 1;
    e.push_back(std::move(v));
  }
  return AffineSubspace(q, Vec(static_cast<std::size_t>(n), 0), std::move(e));
}

std::uint64_t AffineSubspace::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < dim(); ++i) {
    if (s > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(q_)) throw ResourceError("subspace too large");
    s *= static_cast<std::uint64_t>(q_);
  }
  return s;
}

bool AffineSubspace::contains(const Vec& p) const {
  if (static_cast<int>(p.size()) != ambient()) return false;
  Vec d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = md(p[i] - base_[i], q_);
  // Reduce by the echelon basis; the remainder vanishes iff d is in the span.
  for (const auto& row : basis_) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    const int f = d[c];
    if (f == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = md(d[j] - static_cast<long long>(f) * row[j], q_);
  }
  return std::all_of(d.begin(), d.end(), [](int x) { return x == 0; });
}

bool AffineSubspace::contains(const AffineSubspace& other) const {
  if (other.q_ != q_ || other.ambient() != ambient() || other.dim() > dim()) return false;
  if (!contains(other.base_)) return false;
  for (const auto& v : other.basis_) {
    Vec p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = md(base_[i] + v[i], q_);
    if (!contains(p)) return false;
  }
  return true;
}

std::vector<Vec> AffineSubspace::points() const {
  const std::uint64_t count = size();
  if (count > 50'000'000) throw ResourceError("subspace has too many points to enumerate");
  std::vector<Vec> out;
  out.reserve(count);
  Vec coeff(basis_.size(), 0);
  while (true) {
    Vec p = base_;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (coeff[r] == 0) continue;
      for (std::size_t j = 0; j < p.size(); ++j) p[j] = md(p[j] + static_cast<long long>(coeff[r]) * basis_[r][j], q_);
    }
    out.push_back(std::move(p));
    std::size_t k = 0;
    while (k < coeff.size() && ++coeff[k] == q_) coeff[k++] = 0;
    if (k == coeff.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool AffineSubspace::operator<(const AffineSubspace& o) const {
  if (q_ != o.q_) return q_ < o.q_;
  if (dim() != o.dim()) return dim() > o.dim();
  if (basis_ != o.basis_) return basis_ < o.basis_;
  return base_ < o.base_;
}

std::optional<AffineSubspace> intersect(const AffineSubspace& a, const AffineSubspace& b) {
  if (a.q() != b.q() || a.ambient() != b.ambient()) throw InputError("intersect: subspaces live in different spaces");
  const int q = a.q();
  const int n = a.ambient();
  // a = {x : N x = N a0}; substitute x = b0 + t C.
  Matrix normals = nullspace(a.basis(), q, n);
  if (normals.empty()) return b;
  const int k = b.dim();
  Matrix lhs(normals.size(), Vec(static_cast<std::size_t>(k), 0));
  Vec rhs(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    for (int j = 0; j < k; ++j) lhs[i][static_cast<std::size_t>(j)] = dot(normals[i], b.basis()[static_cast<std::size_t>(j)], q);
    rhs[i] = md(dot(normals[i], a.base(), q) - dot(normals[i], b.base(), q), q);
  }
  std::optional<Vec> t0 = solve(lhs, rhs, q, k);
  if (!t0) return std::nullopt;
  auto embed = [&](const Vec& t, bool affine) {
    Vec x = affine ? b.base() : Vec(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < k; ++j) {
      for (int c = 0; c < n; ++c) {
        x[static_cast<std::size_t>(c)] =
            md(x[static_cast<std::size_t>(c)] + static_cast<long long>(t[static_cast<std::size_t>(j)]) * b.basis()[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)], q);
      }
    }
    return x;
  };
  Matrix dirs;
  for (const auto& t : nullspace(lhs, q, k)) dirs.push_back(embed(t, false));
  return AffineSubspace(q, embed(*t0, true), std::move(dirs));
}

AffineSubspace product(const AffineSubspace& a, const AffineSubspace& b) {
  if (a.q() != b.q()) throw InputError("product: different fields");
  const std::size_t na = a.base().size();
  const std::size_t nb = b.base().size();
  Vec base = a.base();
  base.insert(base.end(), b.base().begin(), b.base().end());
  Matrix dirs;
  for (const auto& v : a.basis()) {
    Vec w = v;
    w.resize(na + nb, 0);
    dirs.push_back(std::move(w));
  }
  for (const auto& v : b.basis()) {
    Vec w(na, 0);
    w.insert(w.end(), v.begin(), v.end());
    dirs.push_back(std::move(w));
  }
  return AffineSubspace(a.q(), std::move(base), std::move(dirs));
}

AffineSubspace project(const AffineSubspace& a, int begin, int count) {
  if (begin < 0 || count < 0 || begin + count > a.ambient()) throw InputError("project: coordinate range out of bounds");
  auto slice = [&](const Vec& v) { return Vec(v.begin() + begin, v.begin() + begin + count); };
  Matrix dirs;
  for (const auto& v : a.basis()) dirs.push_back(slice(v));
  return AffineSubspace(a.q(), slice(a.base()), std::move(dirs));
}

AffineSubspace affine_hull(int q, const std::vector<Vec>& points) {
  if (points.empty()) throw InputError("affine hull of no points");
  Matrix dirs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    Vec d(points[i].size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
    dirs.push_back(std::move(d));
  }
  return AffineSubspace(q, points[0], std::move(dirs));
}

LinearVarietyModel::LinearVarietyModel(int q, int n, std::vector<AffineSubspace> components) : q_(q), n_(n) {
  check_field(q_);
  if (n_ < 0) throw InputError("ambient dimension must be >= 0");
  for (const auto& c : components) {
    if (c.q() != q_ || c.ambient() != n_) throw InputError("component lives in a different space");
  }
  std::sort(components.begin(), components.end());
  components.erase(std::unique(components.begin(), components.end()), components.end());
  // Sorted by decreasing dimension, so a container always precedes what it contains.
  for (const auto& c : components) {
    bool redundant = std::any_of(components_.begin(), components_.end(),
                                 [&](const AffineSubspace& kept) { return kept.contains(c); });
    if (!redundant) components_.push_back(c);
  }
}

int LinearVarietyModel::dim() const {
  int d = -1;
  for (const auto& c : components_) d = std::max(d, c.dim());
  return d;
}

bool LinearVarietyModel::contains(const Vec& p) const {
  return std::any_of(components_.begin(), components_.end(), [&](const AffineSubspace& c) { return c.contains(p); });
}

std::vector<Vec> LinearVarietyModel::points() const {
  std::set<Vec> all;
  for (const auto& c : components_) {
    for (auto& p : c.points()) all.insert(std::move(p));
  }
  return {all.begin(), all.end()};
}

namespace {

/// Pieces are already cut down to s. Splits s into q parallel slices until a
/// piece fills a slice, the pieces are too small to fill it, or it is small
/// enough to check point by point.
bool pieces_cover(const AffineSubspace& s, const std::vector<AffineSubspace>& pieces) {
  std::uint64_t total = 0;
  for (const auto& c : pieces) {
    if (c.dim() == s.dim()) return true;
    total += c.size();
  }
  if (total < s.size()) return false;
  if (s.size() <= 64) {
    return for_each_power_point(s, 1, [&](const Vec& p) {
      return std::any_of(pieces.begin(), pieces.end(), [&](const AffineSubspace& c) { return c.contains(p); });
    });
  }
  const std::vector<Vec> rest(s.basis().begin() + 1, s.basis().end());
  Vec base = s.base();
  for (int t = 0; t < s.q(); ++t) {
    const AffineSubspace slice(s.q(), base, rest);
    std::vector<AffineSubspace> cut;
    for (const auto& c : pieces) {
      if (auto i = intersect(c, slice)) cut.push_back(std::move(*i));
    }
    if (!pieces_cover(slice, cut)) return false;
    for (std::size_t k = 0; k < base.size(); ++k) base[k] = (base[k] + s.basis().front()[k]) % s.q();
  }
  return true;
}

}  // namespace

bool LinearVarietyModel::covers(const AffineSubspace& s) const {
  std::vector<AffineSubspace> pieces;
  for (const auto& c : components_) {
    if (c.contains(s)) return true;
    if (auto i = intersect(c, s)) pieces.push_back(std::move(*i));
  }
  return pieces_cover(s, pieces);
}

LinearVarietyModel LinearVarietyModel::from_json(const nlohmann::json& j) {
  try {
    const int q = j.at("q").get<int>();
    const int n = j.at("n").get<int>();
    std::vector<AffineSubspace> comps;
    for (const auto& c : j.at("components")) {
      Vec base = c.at("base").get<Vec>();
      if (static_cast<int>(base.size()) != n) throw InputError("component base has wrong length");
      std::vector<Vec> rows = c.contains("basis_rows") ? c.at("basis_rows").get<std::vector<Vec>>() : std::vector<Vec>{};
      comps.emplace_back(q, std::move(base), std::move(rows));
    }
    return LinearVarietyModel(q, n, std::move(comps));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed linear model: ") + e.what());
  }
}

nlohmann::ordered_json LinearVarietyModel::to_json() const {
  nlohmann::ordered_json j;
  j["q"] = q_;
  j["n"] = n_;
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : components_) {
    nlohmann::ordered_json cj;
    cj["base"] = c.base();
    cj["basis_rows"] = c.basis();
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  return j;
}

LinearVarietyModel intersect(const LinearVarietyModel& a, const LinearVarietyModel& b) {
  if (a.q() != b.q() || a.n() != b.n()) throw InputError("intersect: models live in different spaces");
  std::vector<AffineSubspace> out;
  for (const auto& x : a.components()) {
    for (const auto& y : b.components()) {
      if (auto z = intersect(x, y)) out.push_back(std::move(*z));
    }
  }
  return LinearVarietyModel(a.q(), a.n(), std::move(out));
}

LinearVarietyModel unite(const LinearVarietyModel& a, const LinearVarietyModel& b) {
  if (a.q() != b.q() || a.n() != b.n()) throw InputError("unite: models live in different spaces");
  std::vector<AffineSubspace> out = a.components();
  out.insert(out.end(), b.components().begin(), b.components().end());
  return LinearVarietyModel(a.q(), a.n(), std::move(out));
}

LinearVarietyModel power(const LinearVarietyModel& x, int m) {
  if (m < 1) throw InputError("power: exponent must be >= 1");
  std::vector<AffineSubspace> acc = x.components();
  for (int k = 1; k < m; ++k) {
    std::vector<AffineSubspace> next;
    for (const auto& a : acc) {
      for (const auto& c : x.components()) next.push_back(product(a, c));
    }
    acc = std::move(next);
  }
  return LinearVarietyModel(x.q(), x.n() * m, std::move(acc));
}

}  // namespace mwb::linear
