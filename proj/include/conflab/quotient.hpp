#pragma once

// Quotient models M = <phi_lambda> \ (R^n - 0): canonical representatives in the
// sup-norm annulus, the invariant leaf, closed lightlike geodesics with their
// projective holonomy, the distinctness classifier and the Hausdorff witness.

#include <iosfwd>
#include <string>
#include <vector>

#include "conflab/conformal.hpp"
#include "conflab/geodesic.hpp"
#include "conflab/parallel.hpp"
#include "conflab/report.hpp"
#include "conflab/tensor.hpp"

namespace conflab::quotient {

using Point = std::vector<double>;

class QuotientModel {
 public:
  /// Throws InvalidSignature or InadmissibleLambda; verifies that the
  /// generator entries lie in ]0,1[ and that its conformal factor is E1^2 E2^2.
  QuotientModel(int p, int q, conformal::LambdaParams lambda);

  int dim() const { return metric_.dim(); }
  tensor::Signature signature() const { return metric_.declared(); }
  const conformal::LambdaParams& lambda() const { return lambda_; }
  const conformal::DiagonalMap& generator() const { return generator_; }
  const tensor::MetricSpec& metric() const { return metric_; }
  const std::vector<double>& entries() const { return entries_; }
  /// log of each generator entry, all negative.
  const std::vector<double>& log_entries() const { return log_entries_; }

  /// phi^k(x), computed as x_i * exp(k log d_i).
  Point apply_power(const Point& x, int k) const;

 private:
  conformal::LambdaParams lambda_;
  tensor::MetricSpec metric_;
  conformal::DiagonalMap generator_;
  std::vector<double> entries_;
  std::vector<double> log_entries_;
};

QuotientModel build_model(int p, int q, conformal::LambdaParams lambda);

struct Representative {
  Point point;
  int k;  // point = phi^k(x)
};

/// The unique phi^k(x) with |phi^k x|_inf < 1 <= |phi^(k-1) x|_inf.
/// Throws ZeroVector.
Representative project_point(const QuotientModel& m, const Point& x);

/// Precomputed exp(k log d_i) for k in [-K, K].
class ShiftTable {
 public:
  ShiftTable(const QuotientModel& m, int window);
  int window() const { return window_; }
  int dim() const { return n_; }
  const double* factors(int k) const { return table_.data() + static_cast<std::size_t>(k + window_) * n_; }

 private:
  int window_;
  int n_;
  std::vector<double> table_;
};

/// min over |k| <= K of (|a - phi^k b|_2 + |phi^-k a - b|_2) / 2, the mean of
/// the two one-sided distances at a matched shift. Symmetric in a and b.
double quotient_distance(const QuotientModel& m, const Point& a, const Point& b, int window);
double quotient_distance(const ShiftTable& shifts, const Point& a, const Point& b);

/// Symmetric Hausdorff distance of two finite samples under quotient_distance.
double hausdorff_distance(const ShiftTable& shifts, const std::vector<Point>& a, const std::vector<Point>& b,
                          Execution exec = Execution::parallel);

struct LeafVerdict {
  bool sigma_preserved = false;
  bool offset_leaves_moved = false;
  bool weyl_image_is_sigma = false;
  int offset_samples = 0;
  int weyl_samples = 0;
  std::string detail;
  bool ok() const { return sigma_preserved && offset_leaves_moved && weyl_image_is_sigma; }
};

/// Checks that phi preserves Sigma = span{e2, e4}, moves sampled parallel
/// leaves, and that Im W = span{e2, e4} at sampled points of Sigma.
LeafVerdict invariant_leaf_check(const QuotientModel& m, int samples = 8, unsigned seed = 1);

enum class GeodesicTag { gamma_plus, gamma_minus, delta_plus, delta_minus };
const char* to_string(GeodesicTag t);

struct ClosedGeodesic {
  GeodesicTag tag;
  int axis;  // 1-based: 2 for gamma, 4 for delta
  int sign;
  geodesic::ProjectiveClass multiplier;
  ExactScalar exact_multiplier;
};

/// Ray along the 1-based axis is lightlike, geodesic (Gamma^k_aa = 0) and
/// mapped to itself by phi.
bool axis_ray_is_closed_lightlike_geodesic(const QuotientModel& m, int axis);

/// The four closed lightlike geodesics, each verified.
std::vector<ClosedGeodesic> closed_lightlike_geodesics(const QuotientModel& m);

struct HolonomyResult {
  double from_generator;
  double from_transport;
  ExactScalar exact;
};

/// Multiplier from the generator entry and from the Moebius return map of a
/// transported projective parameter. Throws MismatchBetweenMethods when they
/// differ by more than tolerance.
HolonomyResult holonomy_multiplier(const QuotientModel& m, const ClosedGeodesic& g, double tolerance = 1e-12);

struct InvariantPair {
  double gamma;
  double delta;
  ExactScalar gamma_exact;
  ExactScalar delta_exact;
};

InvariantPair classify_model(const QuotientModel& m);
/// Throws SignatureMismatch. Symbolic models compare exactly (including
/// their bindings); otherwise within tolerance.
bool models_equivalent(const QuotientModel& a, const QuotientModel& b, double tolerance = 1e-12);

struct WitnessRow {
  double t;
  double hausdorff;
  double resolution;
};

struct EssentialityWitness {
  std::vector<WitnessRow> rows;
  int grid = 0;
  int window = 0;
};

/// Grid samples of U (x_j in [-1/2,1/2], x3 in [1/2,3/2]) and of I (x3 at the
/// same nodes, other coordinates 0).
std::vector<Point> sample_box(int n, int grid);
std::vector<Point> sample_segment(int n, int grid);

/// d_H(phi^t(pi U), pi I) for each t. Throws InvalidArgument unless grid >= 3
/// and t strictly increases.
EssentialityWitness essentiality_witness(const QuotientModel& m, const std::vector<double>& t_values, int grid = 5,
                                         int window = 40, Execution exec = Execution::parallel);
/// d_H(phi^t(pi I), pi I).
double segment_self_distance(const QuotientModel& m, double t, int grid = 5, int window = 40);

/// CSV with header t,hausdorff,resolution.
void write_witness_csv(std::ostream& os, const EssentialityWitness& w);

/// signature, lambda, generator entries and multipliers.
report::Value model_json(const QuotientModel& m);

}  // namespace conflab::quotient
