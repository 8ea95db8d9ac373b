#include "qtherm/sampling.hpp"

#include <cmath>

namespace qtherm {

namespace {

ComplexMatrix gaussian_matrix(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      m(i, j) = Complex(re, normal(rng));
    }
  }
  return m;
}

}  // namespace

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  if (dim < 1) throw ValidationError("unitary needs dim >= 1");
  const ComplexMatrix g = gaussian_matrix(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

HermitianOperator random_hermitian(std::size_t dim, Rng& rng, double scale) {
  const ComplexMatrix g = gaussian_matrix(dim, rng);
  return HermitianOperator(0.5 * scale * (g + g.adjoint()));
}

DensityOperator random_density(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector p(static_cast<Eigen::Index>(dim));
  for (auto& x : p) {
    const double g = normal(rng);
    x = g * g;
  }
  p /= p.sum();
  return DensityOperator::from_spectrum(p, random_unitary(dim, rng));
}

Eigen::VectorXcd random_state(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) {
    const double re = normal(rng);
    x = Complex(re, normal(rng));
  }
  return v / v.norm();
}

}  // namespace qtherm
