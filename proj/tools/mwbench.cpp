#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "mwb/config.hpp"
#include "mwb/counting.hpp"
#include "mwb/cover.hpp"
#include "mwb/degree.hpp"
#include "mwb/elliptic.hpp"
#include "mwb/errors.hpp"
#include "mwb/lattice.hpp"
#include "mwb/packing.hpp"
#include "mwb/testbed.hpp"

using namespace mwb;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  // height
  std::string a4 = "0", a6 = "0", x, y;
  double tol = 1e-10;
  // degrees
  unsigned g = 1, r = 1;
  std::string d = "1", l = "1";
};

WorkbenchConfig config_of(const Options& o) {
  WorkbenchConfig cfg = o.config.empty() ? WorkbenchConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = ordered_json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(format_real(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json cmd_height(const Options& o) {
  EllipticCurve e(parse_rational(o.a4), parse_rational(o.a6));
  ECPoint p = o.x.empty() ? ECPoint::infinity() : ECPoint(parse_rational(o.x), parse_rational(o.y));
  if (!e.contains(p)) throw InputError("point is not on the curve");
  HeightOptions opts;
  opts.tol = o.tol;
  HeightValue h = canonical_height(e, p, opts);
  TorsionOptions topts;
  topts.height = opts;
  ordered_json j;
  j["value"] = format_real(h.value);
  j["error_bound"] = format_real(h.error_bound);
  j["torsion"] = is_torsion(e, p, topts);
  return j;
}

ordered_json cmd_lattice(const WorkbenchConfig& cfg) {
  auto out = ordered_json::array();
  for (const auto& c : cfg.curves) {
    std::vector<std::string> warnings;
    MWLattice lat = lattice_from_curve(c.curve, c.generators, cfg.height, &warnings);
    ordered_json j;
    j["label"] = c.label;
    j["rank"] = lat.rank();
    j["gram"] = matrix_json(lat.gram());
    j["min_eigenvalue"] = format_real(lat.min_eigenvalue());
    j["positive_definite"] = lat.positive_definite();
    j["warnings"] = warnings;
    out.push_back(std::move(j));
  }
  return out;
}

ordered_json cmd_pack(const WorkbenchConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  auto out = ordered_json::array();
  for (const auto& spec : cfg.lattices) {
    MWLattice lat(spec.gram);
    ordered_json j;
    j["label"] = spec.label;
    ConeCover cover = build_cone_cover(lat, cfg.pack.c4);
    j["cone_count"] = cover.count();
    j["cone_bound"] = to_string(cover.bound());
    std::size_t assigned = 0;
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd y(lat.rank());
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
      if (y.norm() == 0) continue;
      cover.assign(y);
      ++assigned;
    }
    j["random_directions_assigned"] = assigned;
    auto points = enumerate_ball(lat, cfg.pack.radius);
    BallCoverCertificate cert = greedy_ball_cover(lat, points, cfg.pack.radius, cfg.pack.ball);
    j["points"] = points.size();
    j["centers"] = cert.centers.size();
    j["ball_bound"] = to_string(cert.bound);
    j["min_separation"] = format_real(cert.min_separation);
    out.push_back(std::move(j));
  }
  return out;
}

ordered_json cmd_degrees(const Options& o) {
  const Integer d = parse_rational(o.d).convert_to<Integer>();
  const Integer l = parse_rational(o.l).convert_to<Integer>();
  VarietyInvariants{o.g, o.r, d, l}.validate();
  ordered_json j;
  j["product_degree_XxX"] = to_string(product_degree(o.r, o.r, d, d));
  j["difference_degree_bound"] = to_string(minkowski_sum_degree_bound(o.r, o.r, d, d));
  if (o.r >= 1) {
    auto closed = ordered_json::array();
    auto chain = ordered_json::array();
    for (unsigned k = 1; k <= o.g; ++k) {
      closed.push_back(to_string(generated_subvariety_bound(o.g, o.r, d, k)));
      chain.push_back(to_string(generated_subvariety_chain_bound(o.g, o.r, d, k)));
    }
    j["generated_subvariety_bound"] = std::move(closed);
    j["generated_subvariety_chain_bound"] = std::move(chain);
  }
  IsogenyTransport t = isogeny_degree_transport(o.g, d, l);
  j["isogeny"] = {{"deg_u0", to_string(t.deg_u0)},
                  {"deg_u", to_string(t.deg_u)},
                  {"d_prime_bound", to_string(t.d_prime_bound)},
                  {"faltings_shift", format_real(t.faltings_shift.value())}};
  if (l / factorial(o.g) >= 2) {
    j["embedding_dimension"] = to_string(embedding_dimension(o.g, l));
  } else {
    j["embedding_dimension"] = nullptr;
  }
  return j;
}

ordered_json cmd_pipeline(const WorkbenchConfig& cfg) {
  if (!cfg.pipeline) throw InputError("config has no pipeline section");
  const PointSetSpec& spec = *cfg.pipeline;
  HeightedPointSet set{MWLattice(spec.gram), spec.points, spec.dim_x, {}};
  set.oracle.mode = spec.isolation;
  PipelineConstants constants = cfg.constants;
  constants.rank = static_cast<unsigned>(set.lattice.rank());
  constants.r = spec.dim_x;
  ConstantLedger ledger = build_ledger(constants);
  PipelineReport report = run_pipeline(set, ledger);
  ordered_json j;
  j["report"] = report.to_json();
  j["ledger"] = ledger.to_json();
  return j;
}

ordered_json cmd_cover(const WorkbenchConfig& cfg) {
  using namespace linear;
  CoverSpec spec;
  if (cfg.cover) {
    spec = *cfg.cover;
  } else {
    // A line in F_3^2, Z the diagonal of X^2, Sigma one point.
    AffineSubspace line(3, {0, 0}, {{1, 1}});
    spec.x = LinearVarietyModel(3, 2, {line});
    spec.m = 2;
    spec.z = LinearVarietyModel(3, 4, {AffineSubspace(3, {0, 0, 0, 0}, {{1, 1, 1, 1}})});
    spec.sigma = {{1, 1}};
  }
  NogaAlonTrace trace;
  LinearVarietyModel xp = nogaalon_cover(spec.x, spec.m, spec.z, spec.sigma, &trace);
  ordered_json j;
  j["x"] = spec.x.to_json();
  j["m"] = spec.m;
  j["z"] = spec.z.to_json();
  j["sigma"] = spec.sigma;
  j["x_prime"] = xp.to_json();
  j["cases"] = trace.cases;
  if (!trace.fallback.empty()) j["fallback"] = trace.fallback;
  const Integer bound = nogaalon_degree_bound(static_cast<unsigned>(spec.m),
                                              static_cast<unsigned>(spec.x.dim()), 1,
                                              std::max<Integer>(1, spec.z.degree()));
  j["components"] = xp.degree();
  j["degree_bound"] = to_string(bound);
  if (Integer(xp.degree()) > bound) {
    throw CertificateError("cover: component count exceeds the degree bound", j.dump(2));
  }
  return j;
}

ordered_json cmd_testbed(const WorkbenchConfig& cfg) {
  TestbedResult res = enumerate_testbed(cfg);
  return res.to_json(cfg);
}

void emit(const ordered_json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mordell-Weil counting workbench"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomised test data");
  app.add_option("--out", o.out, "Write the JSON report here instead of stdout");

  auto* height = app.add_subcommand("height", "Canonical height of a point");
  height->add_option("--a4", o.a4, "Curve coefficient a4");
  height->add_option("--a6", o.a6, "Curve coefficient a6");
  height->add_option("--x", o.x, "x-coordinate (omit for O)");
  height->add_option("--y", o.y, "y-coordinate");
  height->add_option("--tol", o.tol, "Tolerance");

  auto* degrees = app.add_subcommand("degrees", "Degree calculus for (g, dim X, deg X, deg A)");
  degrees->add_option("--g", o.g, "dim A")->required();
  degrees->add_option("--r", o.r, "dim X")->required();
  degrees->add_option("--d", o.d, "deg X")->required();
  degrees->add_option("--l", o.l, "deg A")->required();

  std::map<std::string, ordered_json (*)(const WorkbenchConfig&)> config_commands = {
      {"lattice", cmd_lattice}, {"pack", cmd_pack},   {"ledger", nullptr},
      {"pipeline", cmd_pipeline}, {"cover", cmd_cover}, {"testbed", cmd_testbed}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : config_commands) {
    subs[name] = app.add_subcommand(name, "Run '" + name + "' on a config");
    subs[name]->add_option("--config", o.config, "JSON config file");
  }

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) o.seed = seed;

  try {
    ordered_json result;
    if (height->parsed()) {
      result = cmd_height(o);
    } else if (degrees->parsed()) {
      result = cmd_degrees(o);
    } else if (subs["ledger"]->parsed()) {
      result = build_ledger(config_of(o).constants).to_json();
    } else {
      for (const auto& [name, fn] : config_commands) {
        if (fn && subs[name]->parsed()) result = fn(config_of(o));
      }
    }
    emit(result, o.out);
    return 0;
  } catch (const CertificateError& e) {
    std::cerr << "certificate failure: " << e.what() << '\n';
    if (!e.details.empty()) std::cout << e.details << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << " (partial estimate " << e.partial_estimate << ")\n";
    return 4;
  } catch (const DiagnosticError& e) {
    std::cerr << "diagnostic failure: " << e.what() << '\n';
    return 3;
  }
}
