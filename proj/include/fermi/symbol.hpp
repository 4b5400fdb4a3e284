#pragma once

// Hermitian symbols k -> H(k) on the 1- or 2-torus with matrix fibers.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "fermi/hermitian.hpp"
#include "fermi/random.hpp"

namespace fermi {

using KPoint = std::array<double, 2>;  // 1-D symbols ignore k[1]

/// Matrix-valued function on the torus; need not be Hermitian (observables
/// and products of symbols).
using MatrixField = std::function<ComplexMatrix(const KPoint&)>;

class HermitianSymbol {
 public:
  virtual ~HermitianSymbol() = default;

  virtual Index fiber_dim() const = 0;
  virtual int torus_dim() const = 0;
  /// H(k); 2 pi periodic in each coordinate.
  virtual ComplexMatrix evaluate(const KPoint& k) const = 0;

  ComplexMatrix operator()(const KPoint& k) const { return evaluate(k); }
  /// Ascending eigenvalues of H(k).
  RealVector eigenvalues(const KPoint& k) const;
  MatrixField field() const;
};

using SymbolPtr = std::shared_ptr<const HermitianSymbol>;

/// c e^{i(m1 k1 + m2 k2)} placed at entry (row, col).
struct FourierTerm {
  Index row = 0;
  Index col = 0;
  int m1 = 0;
  int m2 = 0;
  Complex coeff{};
};

/// Finite trigonometric polynomial per matrix entry. Hermiticity is checked
/// on the coefficients: c_ji(-m) = conj(c_ij(m)).
class TrigPolynomialSymbol final : public HermitianSymbol {
 public:
  /// Throws InvalidSymbol on bad indices, m2 != 0 for a 1-D torus, or
  /// coefficients violating Hermiticity by more than `tol`.
  TrigPolynomialSymbol(Index fiber_dim, int torus_dim, std::vector<FourierTerm> terms, double tol = 1e-12);

  Index fiber_dim() const override { return n_; }
  int torus_dim() const override { return d_; }
  ComplexMatrix evaluate(const KPoint& k) const override;

  const std::vector<FourierTerm>& terms() const noexcept { return terms_; }

 private:
  Index n_;
  int d_;
  std::vector<FourierTerm> terms_;
};

/// Wraps an arbitrary callable. Hermiticity is checked per evaluation when
/// the result feeds a HermitianMatrix.
class MatrixSymbol final : public HermitianSymbol {
 public:
  MatrixSymbol(Index fiber_dim, int torus_dim, MatrixField fn);

  Index fiber_dim() const override { return n_; }
  int torus_dim() const override { return d_; }
  ComplexMatrix evaluate(const KPoint& k) const override;

 private:
  Index n_;
  int d_;
  MatrixField fn_;
};

/// Hermitian trigonometric polynomial with |m_i| <= order and Gaussian
/// coefficients scaled by 1 / (1 + |m|^2).
TrigPolynomialSymbol random_trig_polynomial(Index fiber_dim, int torus_dim, int order, Rng& rng);

}  // namespace fermi
