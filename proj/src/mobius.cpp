#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "conflab/geodesic.hpp"

namespace conflab::geodesic {

namespace {

MobiusMap from_kernel(const Eigen::Vector4d& k) { return MobiusMap{k(0), k(1), k(2), k(3)}.normalized(); }

}  // namespace

MobiusMap MobiusMap::normalized() const {
  const double dt = det();
  if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "degenerate Moebius matrix");
  const double s = 1.0 / std::sqrt(std::abs(dt));
  return {a * s, b * s, c * s, d * s};
}

MobiusMap compose(const MobiusMap& f, const MobiusMap& g) {
  return {f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d, f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d};
}

ProjectiveClass mobius_multiplier(const MobiusMap& m, double tolerance) {
  const double dt = m.det();
  if (dt == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate Moebius matrix");
  const double tau = m.trace() * m.trace() / dt;
  if (!(tau > 4.0 + tolerance))
    throw Error(ErrorCode::NotHyperbolic, "trace^2/det = " + std::to_string(tau) + " is not above 4");
  const double w = tau - 2.0;
  return {2.0 / (w + std::sqrt(w * w - 4.0))};
}

MobiusMap mobius_through(std::span<const double, 3> z, std::span<const double, 3> w) {
  if (z[0] == z[1] || z[1] == z[2] || z[0] == z[2] || w[0] == w[1] || w[1] == w[2] || w[0] == w[2])
    throw Error(ErrorCode::InvalidArgument, "Moebius interpolation needs distinct points");
  Eigen::Matrix<double, 3, 4> a;
  for (int i = 0; i < 3; ++i) a.row(i) << z[i], 1.0, -z[i] * w[i], -w[i];
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(a, Eigen::ComputeFullV);
  return from_kernel(svd.matrixV().col(3));
}

MobiusFit fit_mobius(std::span<const double> z, std::span<const double> w) {
  if (z.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "z and w sample counts differ");
  if (z.size() < 3) throw Error(ErrorCode::InvalidArgument, "a Moebius fit needs at least 3 pairs");
  const auto m = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd a(m, 4);
  for (Eigen::Index i = 0; i < m; ++i) {
    a.row(i) << z[i], 1.0, -z[i] * w[i], -w[i];
    a.row(i) /= a.row(i).norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  MobiusFit fit{from_kernel(svd.matrixV().col(3)), 0.0};
  for (std::size_t i = 0; i < z.size(); ++i) fit.residual = std::max(fit.residual, std::abs(fit.map(z[i]) - w[i]));
  return fit;
}

}  // namespace conflab::geodesic
