#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qtherm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Raised whenever an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense complex Hermitian matrix. Construction checks the conjugate
/// symmetry entry by entry and then symmetrizes away the residual.
class HermitianOperator {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  explicit HermitianOperator(ComplexMatrix entries);
  static HermitianOperator from_real(const Eigen::MatrixXd& entries);
  static HermitianOperator diagonal(const RealVector& values);
  static HermitianOperator identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double trace() const { return entries_.trace().real(); }
  /// True when every imaginary part is exactly zero.
  bool is_real() const;

 private:
  ComplexMatrix entries_;
};

/// Largest |H(i,j) - conj(H(j,i))| over all entries.
double max_asymmetry(const ComplexMatrix& m);

struct SpectralDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // column i pairs with eigenvalue i

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  ComplexMatrix reconstruct() const;
};

/// Eigendecomposition of a Hermitian operator.
///
/// Eigenvalues come back ascending. Within a degenerate block the
/// eigenvectors are basis dependent; they are ordered by the index of their
/// first non-negligible component and phase-fixed so that component is real
/// and positive, which makes the output deterministic for a fixed input.
/// Callers should only rely on basis-independent quantities inside a block.
SpectralDecomposition eigh(const HermitianOperator& h);

/// V diag(f(lambda)) V^dagger. Throws if f is non-finite at any eigenvalue.
HermitianOperator spectral_map(const HermitianOperator& h,
                               const std::function<double(double)>& f);

/// exp(-i H t), the unitary generated by H.
ComplexMatrix unitary_evolution(const HermitianOperator& h, double t);

}  // namespace qtherm
