#include "mwb/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "mwb/errors.hpp"

namespace mwb {

namespace {

void check_dim(const MWLattice& lat, const LatticeVector& v) {
  if (static_cast<int>(v.size()) != lat.rank()) {
    throw InputError("vector of length " + std::to_string(v.size()) + " in a rank " +
                     std::to_string(lat.rank()) + " lattice");
  }
}

Eigen::VectorXd to_real(const LatticeVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = static_cast<double>(v[i]);
  return out;
}

}  // namespace

MWLattice::MWLattice(Eigen::MatrixXd gram, LatticeSource source) : gram_(std::move(gram)), source_(source) {
  if (gram_.rows() != gram_.cols()) throw InputError("Gram matrix is not square");
  if (!gram_.allFinite()) throw InputError("Gram matrix has non-finite entries");
  if (gram_.rows() == 0) return;
  const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < gram_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::fabs(gram_(i, j) - gram_(j, i)) > 1e-12 * scale) throw InputError("Gram matrix is not symmetric");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
  min_eig_ = eig.eigenvalues().minCoeff();
  if (min_eig_ < -kPsdTolerance) {
    throw InputError("Gram matrix is not positive semidefinite (eigenvalue " + format_real(min_eig_) + ")");
  }
  if (positive_definite()) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram_);
    if (llt.info() == Eigen::Success) chol_ = llt.matrixU();
  }
}

bool MWLattice::positive_definite() const {
  if (rank() == 0) return true;
  const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
  return min_eig_ > kPsdTolerance * scale;
}

const Eigen::MatrixXd& MWLattice::euclidean_basis() const {
  if (chol_.rows() != gram_.rows()) throw InputError("Gram matrix is only semidefinite; fibres are unbounded");
  return chol_;
}

Eigen::VectorXd MWLattice::embed(const LatticeVector& v) const {
  check_dim(*this, v);
  return euclidean_basis() * to_real(v);
}

double height(const MWLattice& lat, const LatticeVector& v) { return pairing(lat, v, v); }

double pairing(const MWLattice& lat, const LatticeVector& v, const LatticeVector& w) {
  check_dim(lat, v);
  check_dim(lat, w);
  return to_real(v).dot(lat.gram() * to_real(w));
}

double norm(const MWLattice& lat, const LatticeVector& v) { return std::sqrt(std::max(0.0, height(lat, v))); }

double cosine(const MWLattice& lat, const LatticeVector& v, const LatticeVector& w) {
  double nv = norm(lat, v);
  double nw = norm(lat, w);
  if (nv * nw <= 0) throw InputError("cosine with a zero vector");
  return std::clamp(pairing(lat, v, w) / (nv * nw), -1.0, 1.0);
}

MWLattice lattice_from_curve(const EllipticCurve& curve, const std::vector<ECPoint>& generators,
                             const HeightOptions& opts, std::vector<std::string>* warnings) {
  const auto n = static_cast<Eigen::Index>(generators.size());
  Eigen::MatrixXd gram(n, n);
  std::vector<double> diag(generators.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    diag[i] = canonical_height(curve, generators[i], opts).value;
    gram(i, i) = diag[i];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double hs = canonical_height(curve, curve.add(generators[i], generators[j]), opts).value;
      gram(i, j) = gram(j, i) = (hs - diag[i] - diag[j]) / 2.0;
    }
  }
  MWLattice lat(std::move(gram), LatticeSource::curve_derived);
  if (warnings != nullptr && lat.min_eigenvalue() < -10.0 * opts.tol) {
    warnings->push_back("Gram eigenvalue " + format_real(lat.min_eigenvalue()) + " below -10*tol");
  }
  return lat;
}

std::vector<LatticeVector> enumerate_ball(const MWLattice& lat, double radius, std::size_t max_points) {
  if (!(radius >= 0)) throw InputError("enumerate_ball: radius must be nonnegative");
  const int n = lat.rank();
  std::vector<LatticeVector> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  const Eigen::MatrixXd& r = lat.euclidean_basis();
  const double bound = radius * radius * (1.0 + 1e-12) + 1e-12;

  // Depth-first over coordinates n-1 down to 0. At level i the partial sum
  // of squares from rows i+1..n-1 is fixed and row i contributes
  // (R_ii v_i + c_i)^2 with c_i = sum_{j>i} R_ij v_j.
  LatticeVector v(n, 0);
  std::vector<double> partial(n + 1, 0.0);
  auto recurse = [&](auto&& self, int i) -> void {
    double c = 0.0;
    for (int j = i + 1; j < n; ++j) c += r(i, j) * static_cast<double>(v[j]);
    double rem = bound - partial[i + 1];
    if (rem < 0) return;
    double half = std::sqrt(rem) / r(i, i);
    double centre = -c / r(i, i);
    auto lo = static_cast<std::int64_t>(std::ceil(centre - half));
    auto hi = static_cast<std::int64_t>(std::floor(centre + half));
    for (std::int64_t k = lo; k <= hi; ++k) {
      double t = r(i, i) * static_cast<double>(k) + c;
      partial[i] = partial[i + 1] + t * t;
      if (partial[i] > bound) continue;
      v[i] = k;
      if (i == 0) {
        if (out.size() >= max_points) throw ResourceError("enumerate_ball: more than max_points vectors");
        out.push_back(v);
      } else {
        self(self, i - 1);
      }
    }
    v[i] = 0;
  };
  recurse(recurse, n - 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mwb
