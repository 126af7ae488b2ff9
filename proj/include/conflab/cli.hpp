#pragma once

// Command implementations behind the conflab executable. Each returns a
// ReportDocument; library errors propagate as conflab::Error.

#include <optional>
#include <string>
#include <vector>

#include "conflab/report.hpp"

namespace conflab::cli {

struct MetricSource {
  /// Either "g0" with (p, q), "flat" with (p, q), or a metric file.
  std::string builtin = "g0";
  int p = 3;
  int q = 3;
  std::optional<std::string> file;
};

struct CurvatureOptions {
  MetricSource metric;
  /// Rational coordinates ("1", "-1/2", "0.25"); default all ones.
  std::vector<std::string> point;
};

struct VerifyConformalOptions {
  int p = 3;
  int q = 3;
  double alpha = -2.0;
  double beta = -1.5;
  bool symbolic = false;
  std::optional<double> t;
  double tolerance = 1e-12;
};

struct ClassifyOptions {
  int p = 3;
  int q = 3;
  std::vector<double> lambda1 = {-2.0, -1.5};
  std::vector<double> lambda2 = {-2.0, -1.5};
  double tolerance = 1e-12;
};

struct EssentialDemoOptions {
  int p = 3;
  int q = 3;
  double alpha = -2.0;
  double beta = -1.5;
  std::vector<double> t = {0, 2, 4, 6, 8, 10};
  int grid = 5;
  int window = 40;
  double threshold = 0.05;
  std::optional<std::string> out;
};

struct GeodesicOptions {
  MetricSource metric;
  std::vector<double> x;  // default e2
  std::vector<double> v;  // default e2
  double step = 1e-3;
  int nsteps = 1000;
  bool projective = false;
  double null_tolerance = 1e-9;
  std::optional<std::string> out;
};

report::ReportDocument cmd_curvature(const CurvatureOptions& o);
report::ReportDocument cmd_verify_conformal(const VerifyConformalOptions& o);
report::ReportDocument cmd_classify(const ClassifyOptions& o);
report::ReportDocument cmd_essential_demo(const EssentialDemoOptions& o);
report::ReportDocument cmd_geodesic(const GeodesicOptions& o);

/// {"command": ..., "error": {"code": ..., "message": ...}}
std::string error_json(const std::string& command, const std::string& code, const std::string& message);

}  // namespace conflab::cli
