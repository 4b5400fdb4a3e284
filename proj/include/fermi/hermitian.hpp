#pragma once

// Dense complex linear algebra shared by every other module: Hermitian
// eigendecomposition, spectral projections, functional calculus and
// singular-value based norms.

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace fermi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct SpectralTolerances {
  double hermitian = 1e-12;       // relative to max |entry|
  double orthogonality = 1e-10;   // ||V V* - 1||_F
  double reconstruction = 1e-10;  // relative to ||H||_F
};

/// A square complex matrix that passed the Hermitian check at construction.
/// The stored matrix is the exact Hermitian part (M + M*) / 2, which is
/// bit-identical to the input when the input is already exactly Hermitian.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = SpectralTolerances{}.hermitian);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Ascending eigenvalues with the matching unitary eigenvector columns. Each
/// column's largest-magnitude component is real and positive.
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;

  Index dim() const noexcept { return values.size(); }
};

/// Throws ConvergenceFailure when the solver does not converge or the result
/// misses the orthogonality / reconstruction tolerances.
EigenDecomposition eig_hermitian(const HermitianMatrix& h, const SpectralTolerances& tol = {});

/// Eigenvalues only (ascending). Used in hot loops over Brillouin-zone grids.
RealVector eigenvalues_hermitian(const HermitianMatrix& h);

/// Sum of v_i v_i* over the eigenvalues within `tol` of `lambda`.
HermitianMatrix spectral_projection(const EigenDecomposition& dec, double lambda, double tol);

/// V diag(f(lambda_i)) V*.
ComplexMatrix apply_function(const EigenDecomposition& dec, const std::function<Complex(double)>& f);

/// Unitary diagonalization of a normal matrix via the complex Schur form.
struct NormalDecomposition {
  ComplexVector values;
  ComplexMatrix vectors;
};

/// Throws NotNormal if ||A A* - A* A||_F exceeds tol * max(1, ||A||_F^2).
NormalDecomposition normal_decomposition(const ComplexMatrix& a, double tol = 1e-10);
ComplexMatrix apply_function(const NormalDecomposition& dec, const std::function<Complex(Complex)>& f);

bool is_normal(const ComplexMatrix& a, double tol = 1e-10);

/// sqrt of the smallest eigenvalue of M* M, read off a direct SVD so that
/// values far below sqrt(eps) ||M|| stay accurate.
double smallest_singular_value(const ComplexMatrix& m);

/// All singular values, descending (divide-and-conquer SVD).
RealVector singular_values(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);

}  // namespace fermi
