#pragma once

// Diagonal conformal maps of (R^n, g0): the generator phi_lambda, the flow
// phi^t, exact pullbacks and conformal factors.
//
// Entries are single Laurent terms c * E1^a * E2^b with c > 0. A map carries an
// ExpBinding that fixes the numeric values of log E1 and log E2; maps built
// from different bindings can only be compared numerically.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conflab/exact_algebra.hpp"
#include "conflab/tensor.hpp"

namespace conflab::conformal {

struct LambdaParams {
  double alpha = 0.0;
  double beta = 0.0;
  bool symbolic = false;

  ExpBinding binding() const { return {alpha, beta}; }
};

struct LambdaVerdict {
  bool admissible = false;
  /// -a+2b, 3a, 2a-b, 3b, a+b
  std::array<double, 5> exponents{};
  bool exponents_negative = false;
  std::string reason;
};

/// alpha < beta < alpha/2 < 0.
LambdaVerdict validate_lambda(const LambdaParams& lambda);

class DiagonalMap {
 public:
  /// Throws InvalidArgument unless every entry is a unit with positive coefficient.
  explicit DiagonalMap(std::vector<ExactScalar> entries, ExpBinding binding = {});

  static DiagonalMap identity(int n, ExpBinding binding = {});

  int dim() const { return static_cast<int>(entries_.size()); }
  const std::vector<ExactScalar>& entries() const { return entries_; }
  const ExactScalar& entry(int i) const { return entries_.at(i); }
  const ExpBinding& binding() const { return binding_; }

  std::vector<double> numeric_entries() const;
  DiagonalMap inverse() const;
  DiagonalMap pow(int k) const;
  std::vector<double> apply(std::span<const double> x) const;

  bool operator==(const DiagonalMap&) const = default;

 private:
  std::vector<ExactScalar> entries_;
  ExpBinding binding_;
};

/// a o b. Throws InvalidArgument if the bindings or dimensions differ.
DiagonalMap compose(const DiagonalMap& a, const DiagonalMap& b);
/// Entrywise numeric product, usable across bindings.
std::vector<double> compose_numeric(const DiagonalMap& a, const DiagonalMap& b);
double max_entry_difference(std::span<const double> a, std::span<const double> b);

/// (E1^-1 E2^2, E1^3, E1^2 E2^-1, E2^3, E1 E2, ..., E1 E2), bound to lambda.
DiagonalMap make_phi_lambda(const LambdaParams& lambda, int n);
/// diag(e^{-3t/2}, e^{-3t/2}, 1, e^{-3t}, e^{-3t/2}, ...), written with
/// E1 = e^{t/2} so that every entry is an integer power of E1.
DiagonalMap make_essential_flow(double t, int n);

/// Components d_i d_j g_ij(d x), exact.
std::vector<Polynomial> pullback_components(const DiagonalMap& map, const tensor::MetricSpec& g);
tensor::MetricSpec pullback_metric(const DiagonalMap& map, const tensor::MetricSpec& g);

/// The scalar c with pullback = c * g componentwise. Throws NotConformal naming
/// the first offending (1-based) index pair.
ExactScalar conformal_factor(const DiagonalMap& map, const tensor::MetricSpec& g);

/// If the entries satisfy the exponent relations of phi_lambda
/// (d1^3 = d2^-1 d4^2, d3^3 = d2^2 d4^-1, dj^3 = d2 d4 for j >= 5) returns the
/// numeric lambda with 3 alpha = log d2 and 3 beta = log d4.
std::optional<LambdaParams> recover_lambda(const DiagonalMap& map);

std::vector<double> numeric_exponents(const DiagonalMap& map);

}  // namespace conflab::conformal
