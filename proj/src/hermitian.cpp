#include "fermi/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    fail(Errc::DimensionMismatch, os.str());
  }
}

void fix_phases(ComplexMatrix& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < v.rows(); ++r) {
      // Strict comparison keeps the first of equal-magnitude components.
      const double mag = std::abs(v(r, c));
      if (mag > best * (1.0 + 1e-12)) {
        best = mag;
        arg = r;
      }
    }
    if (best > 0.0) v.col(c) *= std::conj(v(arg, c)) / best;
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  if (!m.allFinite()) fail(Errc::InvalidArgument, "HermitianMatrix: non-finite entry");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "max |M_ij - conj(M_ji)| = " << asym << " exceeds " << tol << " * " << scale;
    fail(Errc::NonHermitian, os.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

EigenDecomposition eig_hermitian(const HermitianMatrix& h, const SpectralTolerances& tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(Errc::ConvergenceFailure, "Hermitian eigensolver did not converge");

  EigenDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
  fix_phases(dec.vectors);

  const Index n = h.dim();
  const double ortho = (dec.vectors * dec.vectors.adjoint() - ComplexMatrix::Identity(n, n)).norm();
  const double norm = h.matrix().norm();
  const double recon =
      (dec.vectors * dec.values.cast<Complex>().asDiagonal() * dec.vectors.adjoint() - h.matrix()).norm();
  if (ortho > tol.orthogonality || recon > tol.reconstruction * std::max(norm, 1e-300)) {
    std::ostringstream os;
    os << "eigendecomposition out of tolerance: ||VV*-1|| = " << ortho << ", ||H - VDV*|| = " << recon;
    fail(Errc::ConvergenceFailure, os.str());
  }
  return dec;
}

RealVector eigenvalues_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(Errc::ConvergenceFailure, "Hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

HermitianMatrix spectral_projection(const EigenDecomposition& dec, double lambda, double tol) {
  const Index n = dec.dim();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  Index selected = 0;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(dec.values(i) - lambda) <= tol) {
      p.noalias() += dec.vectors.col(i) * dec.vectors.col(i).adjoint();
      ++selected;
    }
  }
  if (selected == 0) {
    std::ostringstream os;
    os << "no eigenvalue within " << tol << " of " << lambda;
    fail(Errc::EmptyEigenspace, os.str());
  }
  return HermitianMatrix(p, 1e-10);
}

ComplexMatrix apply_function(const EigenDecomposition& dec, const std::function<Complex(double)>& f) {
  ComplexVector fv(dec.dim());
  for (Index i = 0; i < dec.dim(); ++i) fv(i) = f(dec.values(i));
  return dec.vectors * fv.asDiagonal() * dec.vectors.adjoint();
}

bool is_normal(const ComplexMatrix& a, double tol) {
  const double scale = std::max(1.0, a.squaredNorm());
  return (a * a.adjoint() - a.adjoint() * a).norm() <= tol * scale;
}

NormalDecomposition normal_decomposition(const ComplexMatrix& a, double tol) {
  require_square(a, "normal_decomposition");
  if (!is_normal(a, tol)) fail(Errc::NotNormal, "||AA* - A*A|| exceeds tolerance");
  Eigen::ComplexSchur<ComplexMatrix> schur(a, true);
  if (schur.info() != Eigen::Success) fail(Errc::ConvergenceFailure, "complex Schur decomposition did not converge");
  // For a normal matrix the Schur factor is diagonal up to rounding.
  return {schur.matrixT().diagonal(), schur.matrixU()};
}

ComplexMatrix apply_function(const NormalDecomposition& dec, const std::function<Complex(Complex)>& f) {
  ComplexVector fv(dec.values.size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(dec.values(i));
  return dec.vectors * fv.asDiagonal() * dec.vectors.adjoint();
}

double smallest_singular_value(const ComplexMatrix& m) {
  if (m.size() == 0) fail(Errc::DimensionMismatch, "smallest_singular_value: empty matrix");
  // M*M is singular when M has more columns than rows.
  if (m.rows() < m.cols()) return 0.0;
  // Squaring through M*M would put a sqrt(eps) floor under the result.
  return singular_values(m).minCoeff();
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) fail(Errc::DimensionMismatch, "singular_values: empty matrix");
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success) fail(Errc::ConvergenceFailure, "SVD did not converge");
  return svd.singularValues();
}

double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

}  // namespace fermi
