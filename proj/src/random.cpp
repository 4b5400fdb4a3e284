#include "fermi/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace fermi {

ComplexMatrix ginibre(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re * s, im * s);
    }
  return g;
}

HermitianMatrix random_hermitian(Index n, Rng& rng) {
  const ComplexMatrix g = ginibre(n, rng);
  return HermitianMatrix((g + g.adjoint()) * 0.5);
}

ComplexVector random_unit_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

ComplexMatrix random_unitary(Index n, Rng& rng) {
  const ComplexMatrix g = ginibre(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace fermi
