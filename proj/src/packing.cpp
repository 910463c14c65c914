#include "mwb/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mwb/errors.hpp"
#include "mwb/ledger.hpp"

namespace mwb {

namespace {

constexpr std::uint64_t kScanLimit = 1'000'000;

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      throw ResourceError("cone cover: axis count overflows 64 bits");
    }
    out *= base;
  }
  return out;
}

}  // namespace

Integer cone_count_bound(int rank, double c4) {
  Rational eight_c4 = Rational(8) * rational_from_double(c4);
  // Exact path when sqrt(8 c4) is an integer, which covers the small worked
  // cases where floor() of a rounded power would be fragile.
  if (denominator(eight_c4) == 1) {
    Integer s = boost::multiprecision::sqrt(numerator(eight_c4));
    if (s * s == numerator(eight_c4)) return ipow(Integer(1 + s), static_cast<unsigned>(rank));
  }
  long double base = 1.0L + std::sqrt(8.0L * static_cast<long double>(c4));
  long double p = std::pow(base, static_cast<long double>(rank));
  return Integer(std::floor(p));
}

Eigen::VectorXd ConeCover::axis(std::uint64_t index) const {
  if (index >= count_) throw InputError("cone index out of range");
  const auto n = static_cast<Eigen::Index>(rank_);
  const std::uint64_t per_face = count_ / (2 * static_cast<std::uint64_t>(rank_));
  std::uint64_t face = index / per_face;
  std::uint64_t cell = index % per_face;
  const auto fixed = static_cast<Eigen::Index>(face / 2);
  Eigen::VectorXd a(n);
  a(fixed) = face % 2 == 0 ? 1.0 : -1.0;
  // Remaining coordinates in increasing order, last one least significant.
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    if (j == fixed) continue;
    std::uint64_t c = cell % m_;
    cell /= m_;
    a(j) = -1.0 + (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(m_);
  }
  return a / a.norm();
}

std::uint64_t ConeCover::assign(const Eigen::VectorXd& y) const {
  if (y.size() != rank_) throw InputError("direction has wrong dimension");
  const double len = y.norm();
  if (!(len > 0)) throw InputError("cannot assign the zero vector to a cone");

  Eigen::Index fixed = 0;
  for (Eigen::Index i = 1; i < y.size(); ++i) {
    if (std::fabs(y(i)) > std::fabs(y(fixed))) fixed = i;
  }
  Eigen::VectorXd u = y / std::fabs(y(fixed));
  std::uint64_t face = 2 * static_cast<std::uint64_t>(fixed) + (y(fixed) < 0 ? 1 : 0);
  std::uint64_t cell = 0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (j == fixed) continue;
    double t = std::floor((u(j) + 1.0) / 2.0 * static_cast<double>(m_));
    auto c = static_cast<std::uint64_t>(std::clamp(t, 0.0, static_cast<double>(m_ - 1)));
    cell = cell * m_ + c;
  }
  const std::uint64_t per_face = count_ / (2 * static_cast<std::uint64_t>(rank_));
  std::uint64_t index = face * per_face + cell;
  const double slack = 1e-12;
  if (axis(index).dot(y) / len >= min_cos_ - slack) return index;

  if (count_ <= kScanLimit) {
    for (std::uint64_t i = 0; i < count_; ++i) {
      if (axis(i).dot(y) / len >= min_cos_ - slack) return i;
    }
  }
  throw CertificateError("cone cover: no cone admits the given direction");
}

ConeCover build_cone_cover(const MWLattice& lat, double c4) {
  if (!(c4 > 1)) throw InputError("cone cover needs c4 > 1");
  if (!lat.positive_definite()) throw InputError("cone cover needs a positive definite lattice");
  ConeCover cover;
  cover.rank_ = lat.rank();
  cover.c4_ = c4;
  cover.bound_ = cone_count_bound(cover.rank_, c4);
  cover.min_cos_ = std::sqrt(1.0 - 1.0 / (2.0 * c4));
  if (cover.rank_ == 0) return cover;

  const double need = std::sqrt(static_cast<double>(cover.rank_ - 1)) * std::sqrt(2.0 * c4);
  cover.m_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(need)));
  Integer exact_count = Integer(2 * cover.rank_) * ipow(Integer(cover.m_), static_cast<unsigned>(cover.rank_ - 1));
  if (exact_count > cover.bound_) {
    throw CertificateError("cone cover uses " + exact_count.str() + " cones, above the bound " +
                           cover.bound_.str());
  }
  cover.count_ = 2 * static_cast<std::uint64_t>(cover.rank_) * checked_pow(cover.m_, cover.rank_ - 1);
  return cover;
}

std::uint64_t assign_to_cone(const ConeCover& cover, const MWLattice& lat, const LatticeVector& v) {
  if (cover.ambient_rank() != lat.rank()) throw InputError("cover and lattice ranks differ");
  return cover.assign(lat.embed(v));
}

Integer ball_cover_bound(int rank, double R, double r) {
  if (!(r > 0) || !(R >= 0)) throw InputError("ball cover needs r > 0 and R >= 0");
  Rational base = Rational(1) + Rational(2) * rational_from_double(R) / rational_from_double(r);
  return floor_rational(qpow(base, static_cast<unsigned>(rank)));
}

BallCoverCertificate greedy_ball_cover(const MWLattice& lat, const std::vector<LatticeVector>& points,
                                       double R, double r, const std::optional<LatticeVector>& center) {
  BallCoverCertificate cert;
  cert.R = R;
  cert.r = r;
  cert.bound = ball_cover_bound(lat.rank(), R, r);
  cert.min_separation = std::numeric_limits<double>::infinity();
  if (points.empty()) return cert;

  const Eigen::VectorXd origin =
      center ? lat.embed(*center) : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lat.rank()));
  std::vector<Eigen::VectorXd> y;
  y.reserve(points.size());
  const double r_slack = 1e-9 * std::max(1.0, R);
  for (std::size_t i = 0; i < points.size(); ++i) {
    y.push_back(lat.embed(points[i]));
    if ((y.back() - origin).norm() > R + r_slack) {
      throw InputError("point " + std::to_string(i) + " lies outside the ball of radius R");
    }
  }

  std::vector<double> dist(points.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (true) {
    cert.center_indices.push_back(next);
    cert.centers.push_back(points[next]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      dist[i] = std::min(dist[i], (y[i] - y[next]).norm());
    }
    std::size_t far = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (dist[i] > dist[far]) far = i;
    }
    if (dist[far] <= r) break;
    next = far;
  }

  for (std::size_t a = 0; a < cert.center_indices.size(); ++a) {
    for (std::size_t b = a + 1; b < cert.center_indices.size(); ++b) {
      double d = (y[cert.center_indices[a]] - y[cert.center_indices[b]]).norm();
      cert.min_separation = std::min(cert.min_separation, d);
    }
  }
  if (cert.center_indices.size() > 1 && !(cert.min_separation > r)) {
    throw CertificateError("greedy centers closer than r");
  }
  if (Integer(cert.centers.size()) > cert.bound) {
    throw CertificateError("greedy cover uses " + std::to_string(cert.centers.size()) +
                           " balls, above the bound " + cert.bound.str());
  }
  return cert;
}

}  // namespace mwb
