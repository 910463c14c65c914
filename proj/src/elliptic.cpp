#include "mwb/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mwb/errors.hpp"

namespace mwb {

EllipticCurve::EllipticCurve(Rational a4, Rational a6) : a4_(std::move(a4)), a6_(std::move(a6)) {
  if (discriminant() == 0) throw InputError("singular curve: 4*a4^3 + 27*a6^2 = 0");
}

Rational EllipticCurve::discriminant() const {
  return Rational(-16) * (Rational(4) * a4_ * a4_ * a4_ + Rational(27) * a6_ * a6_);
}

bool EllipticCurve::contains(const ECPoint& p) const {
  if (p.is_infinity()) return true;
  const Rational& x = p.x();
  return p.y() * p.y() == x * x * x + a4_ * x + a6_;
}

ECPoint EllipticCurve::negate(const ECPoint& p) const {
  if (p.is_infinity()) return p;
  return {p.x(), -p.y()};
}

ECPoint EllipticCurve::add_unchecked(const ECPoint& p, const ECPoint& q) const {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  Rational lambda;
  if (p.x() == q.x()) {
    if (p.y() != q.y() || p.y() == 0) return ECPoint::infinity();
    lambda = (Rational(3) * p.x() * p.x() + a4_) / (Rational(2) * p.y());
  } else {
    lambda = (q.y() - p.y()) / (q.x() - p.x());
  }
  Rational x3 = lambda * lambda - p.x() - q.x();
  Rational y3 = lambda * (p.x() - x3) - p.y();
  return {std::move(x3), std::move(y3)};
}

ECPoint EllipticCurve::add(const ECPoint& p, const ECPoint& q) const {
  if (!contains(p) || !contains(q)) throw InputError("point not on curve");
  return add_unchecked(p, q);
}

ECPoint EllipticCurve::sub(const ECPoint& p, const ECPoint& q) const { return add(p, negate(q)); }

ECPoint EllipticCurve::dbl(const ECPoint& p) const { return add(p, p); }

ECPoint EllipticCurve::multiply(long n, const ECPoint& p) const {
  if (!contains(p)) throw InputError("point not on curve");
  ECPoint base = n < 0 ? negate(p) : p;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  ECPoint acc;
  while (k != 0) {
    if (k & 1UL) acc = add_unchecked(acc, base);
    k >>= 1;
    if (k != 0) base = add_unchecked(base, base);
  }
  return acc;
}

ECPoint EllipticCurve::combination(const std::vector<ECPoint>& gens,
                                   const std::vector<std::int64_t>& coeffs) const {
  if (gens.size() != coeffs.size()) throw InputError("combination: coefficient count mismatch");
  ECPoint acc;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (coeffs[i] == 0) continue;
    acc = add_unchecked(acc, multiply(coeffs[i], gens[i]));
  }
  return acc;
}

HeightValue naive_height(const ECPoint& p) {
  if (p.is_infinity()) return {0.0, 0.0};
  Integer num = abs(numerator(p.x()));
  const Integer& den = denominator(p.x());
  const Integer& big = num > den ? num : den;
  return {log_abs(big), 0.0};
}

namespace {

using Form = std::array<Integer, 5>;  // coefficient of X^(4-i) Z^i

Integer eval_form(const Form& f, const Integer& x, const Integer& z) {
  // Horner in the ratio, homogenised.
  Integer acc = f[0];
  Integer zpow = 1;
  for (std::size_t i = 1; i < f.size(); ++i) {
    zpow *= z;
    acc = acc * x + f[i] * zpow;
  }
  return acc;
}

long double eval_form(const std::array<long double, 5>& f, long double x, long double z) {
  long double acc = f[0];
  long double zpow = 1.0L;
  for (std::size_t i = 1; i < f.size(); ++i) {
    zpow *= z;
    acc = acc * x + f[i] * zpow;
  }
  return acc;
}

Integer form_resultant(const Form& f, const Form& g) {
  constexpr std::size_t deg = 4;
  std::vector<std::vector<Integer>> syl(2 * deg, std::vector<Integer>(2 * deg, 0));
  for (std::size_t r = 0; r < deg; ++r) {
    for (std::size_t i = 0; i <= deg; ++i) {
      syl[r][r + i] = f[i];
      syl[deg + r][r + i] = g[i];
    }
  }
  return abs(bareiss_determinant(std::move(syl)));
}

/// Integral doubling forms for x -> x(2P), scaled by a common denominator.
struct DoublingMap {
  Form f;
  Form g;
  std::array<long double, 5> ff{};
  std::array<long double, 5> gf{};
  Integer resultant;

  explicit DoublingMap(const EllipticCurve& c) {
    const Rational& a = c.a4();
    const Rational& b = c.a6();
    Integer da = denominator(a);
    Integer scale = boost::multiprecision::lcm(Integer(da * da), denominator(b));
    Rational s(scale);
    std::array<Rational, 5> fq{Rational(1), Rational(0), Rational(-2) * a, Rational(-8) * b, a * a};
    std::array<Rational, 5> gq{Rational(0), Rational(4), Rational(0), Rational(4) * a, Rational(4) * b};
    for (std::size_t i = 0; i < 5; ++i) {
      Rational fi = fq[i] * s;
      Rational gi = gq[i] * s;
      f[i] = numerator(fi);
      g[i] = numerator(gi);
      ff[i] = f[i].convert_to<long double>();
      gf[i] = g[i].convert_to<long double>();
    }
    resultant = form_resultant(f, g);
    if (resultant == 0) throw InputError("doubling forms share a root; curve is singular");
  }
};

std::size_t bit_length(const Integer& z) { return z == 0 ? 0 : msb(abs(z)) + 1; }

struct TateRun {
  std::vector<double> iterates;  // h([2^k]P)/4^k
  double max_increment = 0.0;    // max |h(2Q) - 4h(Q)|
  bool converged = false;
  double tail = 0.0;
};

/// Streams the doubling recurrence for up to `steps` doublings. When
/// `stop` is set the run ends at the first k meeting the convergence test.
TateRun run_tate(const DoublingMap& map, const ECPoint& p, unsigned steps, const HeightOptions* stop) {
  TateRun run;
  Integer x = numerator(p.x());
  Integer z = denominator(p.x());

  Integer modulus = ipow(map.resultant, steps + 1);
  Integer xm = x % modulus;
  Integer zm = z % modulus;
  if (xm < 0) xm += modulus;

  const Integer& big = abs(x) > z ? abs(x) : z;
  double scale = log_abs(big);
  long double xf = Rational(x, big).convert_to<long double>();
  long double zf = Rational(z, big).convert_to<long double>();

  double t = scale;
  run.iterates.push_back(t);
  for (unsigned k = 0; k < steps; ++k) {
    long double fv = eval_form(map.ff, xf, zf);
    long double gv = eval_form(map.gf, xf, zf);
    long double top = std::max(std::fabs(fv), std::fabs(gv));
    double arch = static_cast<double>(std::log(top));

    Integer fm = eval_form(map.f, xm, zm) % modulus;
    Integer gm = eval_form(map.g, xm, zm) % modulus;
    if (fm < 0) fm += modulus;
    if (gm < 0) gm += modulus;
    Integer common = boost::multiprecision::gcd(boost::multiprecision::gcd(fm, gm), map.resultant);
    modulus /= common;
    xm = (fm / common) % modulus;
    zm = (gm / common) % modulus;

    double increment = arch - log_abs(common);
    run.max_increment = std::max(run.max_increment, std::fabs(increment));
    double weight = std::ldexp(1.0, -2 * static_cast<int>(k + 1));
    t += increment * weight;
    run.iterates.push_back(t);

    xf = fv / top;
    zf = gv / top;

    run.tail = 2.0 * run.max_increment * weight / 3.0;
    if (stop != nullptr && k + 1 >= 3) {
      double diff = std::fabs(increment) * weight;
      if (diff < stop->tol && run.tail <= stop->tol / 16.0) {
        run.converged = true;
        break;
      }
    }
  }
  return run;
}

}  // namespace

std::vector<double> tate_iterates(const EllipticCurve& curve, const ECPoint& p, unsigned steps) {
  if (!curve.contains(p)) throw InputError("point not on curve");
  if (p.is_infinity()) return std::vector<double>(steps + 1, 0.0);
  DoublingMap map(curve);
  return run_tate(map, p, steps, nullptr).iterates;
}

HeightValue canonical_height(const EllipticCurve& curve, const ECPoint& p, const HeightOptions& opts) {
  if (!(opts.tol > 0)) throw InputError("canonical_height: tol must be positive");
  if (!curve.contains(p)) throw InputError("point not on curve");
  if (p.is_infinity()) return {0.0, 0.0};

  DoublingMap map(curve);
  const std::size_t res_bits = bit_length(map.resultant);
  double partial = naive_height(p).value;
  for (unsigned steps = 32;; steps = std::min(2 * steps, opts.max_doublings)) {
    if ((steps + 1) * res_bits > opts.bit_budget) {
      throw ResourceError("canonical_height: exact state for " + std::to_string(steps) +
                              " doublings exceeds the bit budget",
                          partial);
    }
    TateRun run = run_tate(map, p, steps, &opts);
    partial = run.iterates.back();
    if (run.converged) {
      double v = run.iterates.back();
      double rounding = 64.0 * std::numeric_limits<double>::epsilon() * (std::fabs(v) + 1.0);
      double clamp = v < 0 ? -v : 0.0;
      return {std::max(v, 0.0), run.tail + rounding + clamp};
    }
    if (steps >= opts.max_doublings) break;
  }
  throw ResourceError("canonical_height: no convergence within max_doublings", partial);
}

HeightValue nt_pairing(const EllipticCurve& curve, const ECPoint& p, const ECPoint& q,
                       const HeightOptions& opts) {
  HeightValue hpq = canonical_height(curve, curve.add(p, q), opts);
  HeightValue hp = canonical_height(curve, p, opts);
  HeightValue hq = canonical_height(curve, q, opts);
  return {(hpq.value - hp.value - hq.value) / 2.0,
          (hpq.error_bound + hp.error_bound + hq.error_bound) / 2.0};
}

bool is_torsion(const EllipticCurve& curve, const ECPoint& p, const TorsionOptions& opts) {
  if (!curve.contains(p)) throw InputError("point not on curve");
  if (p.is_infinity()) return true;
  bool by_multiples = false;
  ECPoint acc;
  for (unsigned n = 1; n <= opts.n_max; ++n) {
    acc = curve.add(acc, p);
    if (acc.is_infinity()) {
      by_multiples = true;
      break;
    }
  }
  HeightValue h = canonical_height(curve, p, opts.height);
  bool by_height = h.value < opts.tau;
  if (by_multiples != by_height) {
    throw DiagnosticError("torsion criteria disagree: multiples say " +
                          std::string(by_multiples ? "torsion" : "non-torsion") +
                          ", canonical height " + format_real(h.value));
  }
  return by_multiples;
}

}  // namespace mwb
