#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "mwb/counting.hpp"
#include "mwb/elliptic.hpp"
#include "mwb/linear_model.hpp"

namespace mwb {

struct CurveSpec {
  std::string label;
  EllipticCurve curve{0, 1};
  std::vector<ECPoint> generators;
};

struct LatticeSpec {
  std::string label;
  Eigen::MatrixXd gram;
};

/// A concrete point set for the pipeline subcommand.
struct PointSetSpec {
  Eigen::MatrixXd gram;
  std::vector<LatticeVector> points;
  unsigned dim_x = 1;
  IsolationOracle::Mode isolation = IsolationOracle::Mode::distinct_points;
};

/// Subgroup translates known to lie in the correspondence curve, filtered
/// from the count. Only meaningful when both curves coincide.
enum class Exclusion { diagonal, antidiagonal };

struct TestbedSpec {
  std::string curve1;
  std::string curve2;
  /// Height box: both factors satisfy h <= box.
  double box = 0.0;
  std::vector<Exclusion> excluded;
  std::size_t max_combinations = 10'000;
};

struct CoverSpec {
  linear::LinearVarietyModel x{2, 0};
  int m = 1;
  linear::LinearVarietyModel z{2, 0};
  std::vector<linear::Vec> sigma;
};

struct PackSpec {
  double c4 = 100.0;
  /// Radius of the enumerated point cloud and of the covering balls.
  double radius = 3.0;
  double ball = 1.0;
};

struct WorkbenchConfig {
  std::uint64_t seed = 1;
  HeightOptions height;
  std::vector<CurveSpec> curves;
  std::vector<LatticeSpec> lattices;
  PipelineConstants constants;
  PackSpec pack;
  std::optional<PointSetSpec> pipeline;
  std::optional<TestbedSpec> testbed;
  std::optional<CoverSpec> cover;

  /// InputError when absent.
  const CurveSpec& curve(const std::string& label) const;
};

/// Accepts a JSON number or a string such as "3/4", "-2", "1e-6".
Rational rational_field(const nlohmann::json& j, const std::string& what);

/// Validates everything it reads: curves nonsingular, generators on their
/// curves, Gram matrices square, testbed labels known. Unknown top-level
/// keys are rejected so typos do not silently fall back to defaults.
WorkbenchConfig parse_config(const nlohmann::json& j);
WorkbenchConfig load_config(const std::string& path);

}  // namespace mwb
