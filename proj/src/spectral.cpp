#include "qtherm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace qtherm {

double max_asymmetry(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

HermitianOperator::HermitianOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw ValidationError("Hermitian operator must be square with dim >= 1");
  }
  if (!entries_.allFinite()) {
    throw ValidationError("Hermitian operator has non-finite entries");
  }
  const double asym = max_asymmetry(entries_);
  if (asym > kSymmetryTolerance) {
    std::ostringstream msg;
    msg << "operator is not Hermitian: max asymmetry " << asym;
    throw ValidationError(msg.str());
  }
  ComplexMatrix sym = 0.5 * (entries_ + entries_.adjoint());
  entries_ = std::move(sym);
}

HermitianOperator HermitianOperator::from_real(const Eigen::MatrixXd& entries) {
  return HermitianOperator(entries.cast<Complex>());
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
  if (values.size() < 1) throw ValidationError("diagonal operator needs at least one entry");
  return HermitianOperator(values.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  if (dim < 1) throw ValidationError("identity needs dim >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Identity(n, n));
}

bool HermitianOperator::is_real() const {
  return (entries_.imag().array() == 0.0).all();
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

namespace {

Eigen::Index first_significant(const Eigen::VectorXcd& v) {
  const double cut = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) return i;
  }
  return v.size();
}

}  // namespace

SpectralDecomposition eigh(const HermitianOperator& h) {
  SpectralDecomposition out;
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix().real());
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
  }

  const Eigen::Index n = out.eigenvalues.size();
  const double scale = 1.0 + out.eigenvalues.cwiseAbs().maxCoeff();
  const double tie = 1e-10 * scale;

  // Fix the phase of every column, then reorder columns inside degenerate blocks.
  std::vector<Eigen::Index> lead(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    auto col = out.eigenvectors.col(c);
    const Eigen::Index k = first_significant(col);
    lead[static_cast<std::size_t>(c)] = k;
    if (k < n) col *= std::conj(col(k)) / std::abs(col(k));
  }

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.eigenvalues(stop) - out.eigenvalues(stop - 1) <= tie) ++stop;
    if (stop - start > 1) {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(stop - start));
      std::iota(order.begin(), order.end(), start);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lead[static_cast<std::size_t>(a)] < lead[static_cast<std::size_t>(b)];
      });
      ComplexMatrix block(n, stop - start);
      for (std::size_t i = 0; i < order.size(); ++i) {
        block.col(static_cast<Eigen::Index>(i)) = out.eigenvectors.col(order[i]);
      }
      out.eigenvectors.middleCols(start, stop - start) = block;
    }
    start = stop;
  }
  return out;
}

HermitianOperator spectral_map(const HermitianOperator& h,
                               const std::function<double(double)>& f) {
  const auto dec = eigh(h);
  RealVector mapped(dec.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    const double lambda = dec.eigenvalues(i);
    mapped(i) = f(lambda);
    if (!std::isfinite(mapped(i))) {
      std::ostringstream msg;
      msg << "function is undefined at eigenvalue " << lambda << " (index " << i << ")";
      throw ValidationError(msg.str());
    }
  }
  ComplexMatrix result =
      dec.eigenvectors * mapped.cast<Complex>().asDiagonal() * dec.eigenvectors.adjoint();
  return HermitianOperator(0.5 * (result + result.adjoint()));
}

ComplexMatrix unitary_evolution(const HermitianOperator& h, double t) {
  const auto dec = eigh(h);
  Eigen::VectorXcd phases(dec.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -dec.eigenvalues(i) * t);
  }
  return dec.eigenvectors * phases.asDiagonal() * dec.eigenvectors.adjoint();
}

}  // namespace qtherm
