#include "mwb/testbed.hpp"

#include <cmath>

#include "mwb/errors.hpp"

namespace mwb {

namespace {

nlohmann::ordered_json point_json(const ECPoint& p) {
  if (p.is_infinity()) return "O";
  return nlohmann::ordered_json::array({to_string(p.x()), to_string(p.y())});
}

ECPoint point_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "O") throw InputError("bad point encoding");
    return ECPoint::infinity();
  }
  return ECPoint(parse_rational(j.at(0).get<std::string>()), parse_rational(j.at(1).get<std::string>()));
}

nlohmann::ordered_json gram_json(const Eigen::MatrixXd& g) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < g.cols(); ++k) row.push_back(format_real(g(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

bool equal_x(const ECPoint& p, const ECPoint& q) {
  if (p.is_infinity() || q.is_infinity()) return p.is_infinity() && q.is_infinity();
  return p.x() == q.x();
}

TestbedResult enumerate_testbed(const WorkbenchConfig& cfg) {
  if (!cfg.testbed) throw InputError("config has no testbed section");
  const TestbedSpec& spec = *cfg.testbed;
  const CurveSpec& c1 = cfg.curve(spec.curve1);
  const CurveSpec& c2 = cfg.curve(spec.curve2);
  if (c1.generators.empty() || c2.generators.empty()) throw InputError("testbed curves need generators");
  const bool same_curve = c1.curve == c2.curve;
  if (!spec.excluded.empty() && !same_curve) {
    throw InputError("diagonal exclusions need the same curve on both factors");
  }

  const MWLattice lat1 = lattice_from_curve(c1.curve, c1.generators, cfg.height);
  const MWLattice lat2 = lattice_from_curve(c2.curve, c2.generators, cfg.height);
  const double radius = std::sqrt(spec.box);
  const auto ball1 = enumerate_ball(lat1, radius, spec.max_combinations + 1);
  const auto ball2 = enumerate_ball(lat2, radius, spec.max_combinations + 1);
  TestbedResult out;
  out.combinations = ball1.size() * ball2.size();
  if (out.combinations > spec.max_combinations) {
    throw ResourceError("height box gives " + std::to_string(out.combinations) + " combinations, over the limit",
                        static_cast<double>(out.combinations));
  }

  std::vector<ECPoint> pts1, pts2;
  for (const auto& v : ball1) pts1.push_back(c1.curve.combination(c1.generators, v));
  for (const auto& w : ball2) pts2.push_back(c2.curve.combination(c2.generators, w));

  const int r1 = lat1.rank();
  const int r2 = lat2.rank();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(r1 + r2, r1 + r2);
  gram.topLeftCorner(r1, r1) = lat1.gram();
  gram.bottomRightCorner(r2, r2) = lat2.gram();
  out.gram = gram;
  HeightedPointSet set{MWLattice(gram, LatticeSource::curve_derived), {}, 1, {}};

  for (std::size_t i = 0; i < ball1.size(); ++i) {
    for (std::size_t k = 0; k < ball2.size(); ++k) {
      if (!equal_x(pts1[i], pts2[k])) continue;
      TestbedPair pair{ball1[i], ball2[k], pts1[i], pts2[k], false};
      for (Exclusion e : spec.excluded) {
        const ECPoint target = e == Exclusion::diagonal ? pts1[i] : c1.curve.negate(pts1[i]);
        if (pts2[k] == target) pair.excluded = true;
      }
      if (!pair.excluded) {
        LatticeVector joint = pair.v;
        joint.insert(joint.end(), pair.w.begin(), pair.w.end());
        set.points.push_back(std::move(joint));
      }
      out.pairs.push_back(std::move(pair));
    }
  }
  out.empirical_count = set.points.size();

  PipelineConstants constants = cfg.constants;
  constants.g = 2;
  constants.r = 1;
  constants.rank = static_cast<unsigned>(r1 + r2);
  out.ledger = build_ledger(constants);
  out.ledger.record("d", LedgerValue::of(Rational(constants.d)), "input", {},
                    "deg X of the equal-x curve, a configured placeholder", true);
  out.ledger.record("l", LedgerValue::of(Rational(constants.l)), "input", {},
                    "deg A of the product polarization, a configured placeholder", true);
  out.flags.push_back("deg X is a configured placeholder, not derived from the equations");
  if (spec.excluded.empty()) {
    out.flags.push_back("no subgroup translates declared; the Ueno locus is taken to be empty");
  }
  out.report = run_pipeline(set, out.ledger);
  return out;
}

nlohmann::ordered_json TestbedResult::to_json(const WorkbenchConfig& cfg) const {
  const TestbedSpec& spec = *cfg.testbed;
  nlohmann::ordered_json j;
  auto curves = nlohmann::ordered_json::array();
  for (const auto* label : {&spec.curve1, &spec.curve2}) {
    const CurveSpec& c = cfg.curve(*label);
    nlohmann::ordered_json cj;
    cj["label"] = c.label;
    cj["a4"] = to_string(c.curve.a4());
    cj["a6"] = to_string(c.curve.a6());
    auto gens = nlohmann::ordered_json::array();
    for (const auto& g : c.generators) gens.push_back(point_json(g));
    cj["generators"] = std::move(gens);
    curves.push_back(std::move(cj));
  }
  j["curves"] = std::move(curves);
  j["relation"] = "equal-x";
  j["box"] = format_real(spec.box);
  j["combinations"] = combinations;
  auto pj = nlohmann::ordered_json::array();
  for (const auto& p : pairs) {
    nlohmann::ordered_json e;
    e["v"] = p.v;
    e["w"] = p.w;
    e["P"] = point_json(p.p);
    e["Q"] = point_json(p.q);
    if (p.excluded) e["excluded"] = true;
    pj.push_back(std::move(e));
  }
  j["pairs"] = std::move(pj);
  j["empirical_count"] = empirical_count;
  j["certified_bound"] = value_string(report.certified_bound);
  j["flags"] = flags;
  j["report"] = report.to_json();
  j["gram"] = gram_json(gram);
  j["ledger"] = ledger.to_json();
  return j;
}

bool recheck_testbed_json(const nlohmann::json& j) {
  try {
    const auto& curves = j.at("curves");
    EllipticCurve e1(parse_rational(curves.at(0).at("a4").get<std::string>()),
                     parse_rational(curves.at(0).at("a6").get<std::string>()));
    EllipticCurve e2(parse_rational(curves.at(1).at("a4").get<std::string>()),
                     parse_rational(curves.at(1).at("a6").get<std::string>()));
    for (const auto& pair : j.at("pairs")) {
      ECPoint p = point_from_json(pair.at("P"));
      ECPoint q = point_from_json(pair.at("Q"));
      if (!e1.contains(p) || !e2.contains(q) || !equal_x(p, q)) return false;
    }
    return true;
  } catch (const nlohmann::json::exception&) {
    return false;
  } catch (const InputError&) {
    return false;
  }
}

}  // namespace mwb
