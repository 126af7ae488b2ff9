#pragma once

// Metric -> Levi-Civita -> Riemann -> Ricci -> Weyl over exact rational functions.
//
// Index conventions (all zero-based in code, printed one-based):
//   christoffel(k, i, j)  = Gamma^k_{ij},  nabla_{e_i} e_j = Gamma^k_{ij} e_k
//   riemann(l, k, i, j)   = R^l_{kij},     R(e_i, e_j) e_k = R^l_{kij} e_l
//   with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, so
//   R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.
//   ricci(j, k)           = Ric_{jk} = R^i_{kij}
//   weyl(l, k, i, j)      = W^l_{kij}, same slot layout as riemann.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conflab/exact_algebra.hpp"
#include "conflab/parallel.hpp"

namespace conflab::tensor {

struct Signature {
  int p = 0;
  int q = 0;
  bool operator==(const Signature&) const = default;
};

using FramePoint = std::vector<Rational>;

/// Dense n x n matrix of rational functions, row-major.
struct RationalMatrix {
  int n = 0;
  std::vector<RationalFunction> data;

  const RationalFunction& operator()(int i, int j) const { return data[i * n + j]; }
  RationalFunction& operator()(int i, int j) { return data[i * n + j]; }
};

class MetricSpec {
 public:
  /// components is row-major n x n. Throws InvalidSignature, InvalidArgument
  /// (not symmetric) or DegenerateMetric (determinant identically zero).
  MetricSpec(Signature declared, std::vector<Polynomial> components);

  int dim() const { return n_; }
  Signature declared() const { return declared_; }
  const Polynomial& operator()(int i, int j) const { return g_[i * n_ + j]; }
  const std::vector<Polynomial>& components() const { return g_; }
  const Polynomial& determinant() const { return det_; }
  const RationalMatrix& inverse() const { return inverse_; }

  /// f * g with the same declared type. f must not vanish identically.
  MetricSpec conformally_scaled(const Polynomial& factor) const;

 private:
  int n_;
  Signature declared_;
  std::vector<Polynomial> g_;
  Polynomial det_;
  RationalMatrix inverse_;
};

/// g0 = 2 dx1 dx2 + x3^2 dx1^2 + 2 dx3 dx4 + sum_{j>=5} eps_j dx_j^2 with
/// eps_j = +1 for j in {5..4+s}, s = q-2, and -1 otherwise. (2,2) drops the
/// eps block. Throws InvalidSignature unless 2 <= p <= q.
MetricSpec build_g0(int p, int q);

/// Constant diagonal metric with p entries -1 followed by q entries +1.
MetricSpec build_flat_metric(int p, int q);

/// Text format:
///   dim n
///   type p q
///   g i j <polynomial in x1..xn with rational coefficients>
/// Unlisted entries are zero, symmetry is completed, '#' starts a comment.
/// Conflicting duplicates and malformed lines throw ParseError with line numbers.
MetricSpec parse_metric(std::string_view text);
MetricSpec read_metric_file(const std::filesystem::path& path);
std::string format_metric(const MetricSpec& g);

/// Polynomial expression in x1..x{nvars}: + - * ^ parentheses, rational
/// constants, and '/' by constants.
Polynomial parse_polynomial(std::string_view expr, int nvars);

/// Signature at a rational point via exact symmetric congruence.
/// Throws DegenerateAtPoint or NonRationalValue.
Signature signature_at(const MetricSpec& g, std::span<const Rational> x);

/// Returns g^{-1}; Gauss-Jordan over the rational-function field.
/// Throws DegenerateMetric when the matrix is singular.
RationalMatrix metric_inverse(const MetricSpec& g);

/// Dense tensor field of rational functions of fixed rank.
template <int Rank>
class Field {
 public:
  Field() = default;
  Field(int dim, int nvars) : n_(dim), data_(size_for(dim), RationalFunction(nvars)) {}

  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <typename... I>
  const RationalFunction& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[flat(idx...)];
  }
  template <typename... I>
  RationalFunction& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[flat(idx...)];
  }

  const RationalFunction& at_flat(std::size_t k) const { return data_[k]; }
  RationalFunction& at_flat(std::size_t k) { return data_[k]; }
  std::vector<int> unflatten(std::size_t k) const {
    std::vector<int> idx(Rank);
    for (int r = Rank - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(k % n_);
      k /= n_;
    }
    return idx;
  }

  std::size_t count_nonzero() const {
    std::size_t c = 0;
    for (const auto& f : data_) c += f.is_zero() ? 0 : 1;
    return c;
  }
  bool is_identically_zero() const { return count_nonzero() == 0; }
  bool operator==(const Field&) const = default;

 private:
  static std::size_t size_for(int dim) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r) s *= dim;
    return s;
  }
  template <typename... I>
  std::size_t flat(I... idx) const {
    std::size_t k = 0;
    ((k = k * n_ + static_cast<std::size_t>(idx)), ...);
    return k;
  }

  int n_ = 0;
  std::vector<RationalFunction> data_;
};

using Field2 = Field<2>;
using Field3 = Field<3>;
using Field4 = Field<4>;

Field3 christoffel(const MetricSpec& g, Execution exec = Execution::parallel);
Field4 riemann(const MetricSpec& g, const Field3& gamma, Execution exec = Execution::parallel);
Field2 ricci(const Field4& riemann);
RationalFunction scalar_curvature(const MetricSpec& g, const Field2& ricci);
/// Trace-free part W = Rm - P (KN) g, raised back to W^l_{kij}.
/// Throws DimensionTooSmall for n = 3, where it vanishes identically.
Field4 weyl(const MetricSpec& g, const Field4& riemann, const Field2& ricci,
            const RationalFunction& scalar, Execution exec = Execution::parallel);

struct CurvatureReport {
  RationalMatrix inverse;
  Field3 christoffel;
  Field4 riemann;
  Field2 ricci;
  RationalFunction scalar;
  std::optional<Field4> weyl;  // empty for n = 3
};

CurvatureReport compute_curvature(const MetricSpec& g, Execution exec = Execution::parallel);

/// Row-reduced basis of span{ W(e_i, e_j) e_k } at x.
std::vector<std::vector<Rational>> weyl_image_at(const Field4& weyl, std::span<const Rational> x);

struct WeylWitness {
  int l, k, i, j;
  FramePoint point;
  ExactScalar value;
};

struct ConformalFlatness {
  bool flat = false;
  std::optional<WeylWitness> witness;
};

/// Weyl-based criterion, valid for n >= 4. Throws DimensionTooSmall otherwise.
ConformalFlatness is_conformally_flat(const MetricSpec& g, Execution exec = Execution::parallel);
ConformalFlatness conformal_flatness_from(const Field4& weyl);

/// Exact row-reduced echelon basis of the span of the given vectors.
std::vector<std::vector<Rational>> row_reduced_basis(std::vector<std::vector<Rational>> rows);

}  // namespace conflab::tensor
