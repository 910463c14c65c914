#include "mwb/config.hpp"

#include <fstream>
#include <set>

#include "mwb/errors.hpp"

namespace mwb {

namespace {

using nlohmann::json;

void allow_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw InputError("unknown key '" + k + "' in " + where);
  }
}

Integer integer_field(const json& j, const std::string& what) {
  Rational q = rational_field(j, what);
  if (denominator(q) != 1) throw InputError(what + " must be an integer");
  return numerator(q);
}

unsigned unsigned_field(const json& j, const std::string& what) {
  Integer z = integer_field(j, what);
  if (z < 0 || z > 1'000'000) throw InputError(what + " out of range");
  return z.convert_to<unsigned>();
}

double real_field(const json& j, const std::string& what) { return to_double(rational_field(j, what)); }

ECPoint point_field(const json& j, const std::string& what) {
  if (j.is_string() && j.get<std::string>() == "O") return ECPoint::infinity();
  if (!j.is_array() || j.size() != 2) throw InputError(what + " must be [x, y] or \"O\"");
  return ECPoint(rational_field(j[0], what + ".x"), rational_field(j[1], what + ".y"));
}

Eigen::MatrixXd matrix_field(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be a list of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw InputError(what + " must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = real_field(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

CurveSpec parse_curve(const json& j) {
  allow_keys(j, {"label", "a4", "a6", "generators"}, "curve");
  CurveSpec c;
  c.label = j.at("label").get<std::string>();
  c.curve = EllipticCurve(rational_field(j.at("a4"), c.label + ".a4"), rational_field(j.at("a6"), c.label + ".a6"));
  if (j.contains("generators")) {
    for (const auto& g : j.at("generators")) {
      ECPoint p = point_field(g, c.label + " generator");
      if (!c.curve.contains(p)) throw InputError("generator of " + c.label + " is not on the curve");
      c.generators.push_back(std::move(p));
    }
  }
  return c;
}

PipelineConstants parse_constants(const json& j) {
  allow_keys(j,
             {"g", "r", "d", "l", "rank", "h_fal", "h_x", "c4", "c5", "c0", "c_prime", "c_induct", "n_prime", "c7",
              "c8", "c9", "c10", "translate_by_p0"},
             "constants");
  PipelineConstants c;
  if (j.contains("g")) c.g = unsigned_field(j["g"], "g");
  if (j.contains("r")) c.r = unsigned_field(j["r"], "r");
  if (j.contains("d")) c.d = integer_field(j["d"], "d");
  if (j.contains("l")) c.l = integer_field(j["l"], "l");
  if (j.contains("rank")) c.rank = unsigned_field(j["rank"], "rank");
  if (j.contains("h_fal")) c.h_fal = rational_field(j["h_fal"], "h_fal");
  if (j.contains("h_x")) c.h_x = rational_field(j["h_x"], "h_x");
  if (j.contains("c4")) c.c4 = rational_field(j["c4"], "c4");
  if (j.contains("c5")) c.c5 = rational_field(j["c5"], "c5");
  if (j.contains("c0")) c.c0 = rational_field(j["c0"], "c0");
  if (j.contains("c_prime")) c.c_prime = rational_field(j["c_prime"], "c_prime");
  if (j.contains("c_induct")) c.c_induct = rational_field(j["c_induct"], "c_induct");
  if (j.contains("n_prime")) c.n_prime = integer_field(j["n_prime"], "n_prime");
  if (j.contains("c7")) c.c7 = rational_field(j["c7"], "c7");
  if (j.contains("c8")) c.c8 = rational_field(j["c8"], "c8");
  if (j.contains("c9")) c.c9 = rational_field(j["c9"], "c9");
  if (j.contains("c10")) c.c10 = rational_field(j["c10"], "c10");
  if (j.contains("translate_by_p0")) c.translate_by_p0 = j["translate_by_p0"].get<bool>();
  return c;
}

PointSetSpec parse_point_set(const json& j) {
  allow_keys(j, {"gram", "points", "dim_x", "isolation"}, "pipeline");
  PointSetSpec s;
  s.gram = matrix_field(j.at("gram"), "pipeline.gram");
  for (const auto& p : j.at("points")) s.points.push_back(p.get<LatticeVector>());
  if (j.contains("dim_x")) s.dim_x = unsigned_field(j["dim_x"], "dim_x");
  if (j.contains("isolation")) {
    const std::string mode = j["isolation"].get<std::string>();
    if (mode == "distinct_points") {
      s.isolation = IsolationOracle::Mode::distinct_points;
    } else if (mode == "always_true") {
      s.isolation = IsolationOracle::Mode::always_true;
    } else if (mode == "always_false") {
      s.isolation = IsolationOracle::Mode::always_false;
    } else {
      throw InputError("unknown isolation mode '" + mode + "'");
    }
  }
  return s;
}

TestbedSpec parse_testbed(const json& j) {
  allow_keys(j, {"curves", "box", "relation", "excluded", "max_combinations"}, "testbed");
  TestbedSpec t;
  const json& pair = j.at("curves");
  if (!pair.is_array() || pair.size() != 2) throw InputError("testbed.curves must name two curves");
  t.curve1 = pair[0].get<std::string>();
  t.curve2 = pair[1].get<std::string>();
  t.box = real_field(j.at("box"), "testbed.box");
  if (!(t.box >= 0)) throw InputError("testbed.box must be >= 0");
  if (j.contains("relation") && j["relation"].get<std::string>() != "equal-x") {
    throw InputError("only the equal-x relation is supported");
  }
  if (j.contains("excluded")) {
    for (const auto& e : j["excluded"]) {
      const std::string s = e.get<std::string>();
      if (s == "diagonal") {
        t.excluded.push_back(Exclusion::diagonal);
      } else if (s == "antidiagonal") {
        t.excluded.push_back(Exclusion::antidiagonal);
      } else {
        throw InputError("unknown exclusion '" + s + "'");
      }
    }
  }
  if (j.contains("max_combinations")) t.max_combinations = unsigned_field(j["max_combinations"], "max_combinations");
  return t;
}

CoverSpec parse_cover(const json& j) {
  allow_keys(j, {"x", "m", "z", "sigma"}, "cover");
  CoverSpec c;
  c.x = linear::LinearVarietyModel::from_json(j.at("x"));
  c.m = static_cast<int>(unsigned_field(j.at("m"), "cover.m"));
  c.z = linear::LinearVarietyModel::from_json(j.at("z"));
  if (j.contains("sigma")) c.sigma = j["sigma"].get<std::vector<linear::Vec>>();
  return c;
}

}  // namespace

const CurveSpec& WorkbenchConfig::curve(const std::string& label) const {
  for (const auto& c : curves) {
    if (c.label == label) return c;
  }
  throw InputError("no curve labelled '" + label + "'");
}

Rational rational_field(const nlohmann::json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw InputError(what + " is not finite");
    return rational_from_double(x);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError(what + " must be a number or a numeric string");
}

WorkbenchConfig parse_config(const nlohmann::json& j) {
  allow_keys(j, {"seed", "height", "curves", "lattices", "constants", "pack", "pipeline", "testbed", "cover"},
             "config");
  try {
    WorkbenchConfig cfg;
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("height")) {
      const json& h = j["height"];
      allow_keys(h, {"tol", "max_doublings"}, "height");
      if (h.contains("tol")) cfg.height.tol = real_field(h["tol"], "height.tol");
      if (h.contains("max_doublings")) cfg.height.max_doublings = unsigned_field(h["max_doublings"], "max_doublings");
      if (!(cfg.height.tol > 0)) throw InputError("height.tol must be positive");
    }
    std::set<std::string> labels;
    if (j.contains("curves")) {
      for (const auto& c : j["curves"]) {
        cfg.curves.push_back(parse_curve(c));
        if (!labels.insert(cfg.curves.back().label).second) throw InputError("duplicate curve label");
      }
    }
    if (j.contains("lattices")) {
      for (const auto& l : j["lattices"]) {
        allow_keys(l, {"label", "gram"}, "lattice");
        cfg.lattices.push_back({l.at("label").get<std::string>(), matrix_field(l.at("gram"), "lattice.gram")});
      }
    }
    if (j.contains("constants")) cfg.constants = parse_constants(j["constants"]);
    if (j.contains("pack")) {
      const json& p = j["pack"];
      allow_keys(p, {"c4", "radius", "ball"}, "pack");
      if (p.contains("c4")) cfg.pack.c4 = real_field(p["c4"], "pack.c4");
      if (p.contains("radius")) cfg.pack.radius = real_field(p["radius"], "pack.radius");
      if (p.contains("ball")) cfg.pack.ball = real_field(p["ball"], "pack.ball");
      if (!(cfg.pack.radius >= 0) || !(cfg.pack.ball > 0)) throw InputError("pack radii must be positive");
    }
    if (j.contains("pipeline")) cfg.pipeline = parse_point_set(j["pipeline"]);
    if (j.contains("testbed")) {
      cfg.testbed = parse_testbed(j["testbed"]);
      cfg.curve(cfg.testbed->curve1);
      cfg.curve(cfg.testbed->curve2);
    }
    if (j.contains("cover")) cfg.cover = parse_cover(j["cover"]);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
}

WorkbenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace mwb
