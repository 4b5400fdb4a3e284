#include "fermi/symbol.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "fermi/errors.hpp"

namespace fermi {

RealVector HermitianSymbol::eigenvalues(const KPoint& k) const {
  return eigenvalues_hermitian(HermitianMatrix(evaluate(k)));
}

MatrixField HermitianSymbol::field() const {
  return [this](const KPoint& k) { return evaluate(k); };
}

TrigPolynomialSymbol::TrigPolynomialSymbol(Index fiber_dim, int torus_dim, std::vector<FourierTerm> terms, double tol)
    : n_(fiber_dim), d_(torus_dim), terms_(std::move(terms)) {
  if (n_ < 1) fail(Errc::InvalidSymbol, "fiber_dim must be positive");
  if (d_ != 1 && d_ != 2) fail(Errc::InvalidSymbol, "torus dimension must be 1 or 2");

  using Key = std::tuple<Index, Index, int, int>;
  std::map<Key, Complex> coeffs;
  double scale = 0.0;
  for (const auto& t : terms_) {
    if (t.row < 0 || t.row >= n_ || t.col < 0 || t.col >= n_) {
      std::ostringstream os;
      os << "entry (" << t.row << ", " << t.col << ") outside a " << n_ << "x" << n_ << " fiber";
      fail(Errc::InvalidSymbol, os.str());
    }
    if (d_ == 1 && t.m2 != 0) fail(Errc::InvalidSymbol, "1-D symbol with a nonzero m2 frequency");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      fail(Errc::InvalidSymbol, "non-finite Fourier coefficient");
    coeffs[{t.row, t.col, t.m1, t.m2}] += t.coeff;
    scale = std::max(scale, std::abs(t.coeff));
  }
  const double bound = tol * std::max(1.0, scale);
  for (const auto& [key, c] : coeffs) {
    const auto [i, j, m1, m2] = key;
    const auto it = coeffs.find({j, i, -m1, -m2});
    const Complex partner = it == coeffs.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(c)) > bound) {
      std::ostringstream os;
      os << "not Hermitian: c(" << i << "," << j << ";" << m1 << "," << m2 << ") has no conjugate partner";
      fail(Errc::InvalidSymbol, os.str());
    }
  }
}

ComplexMatrix TrigPolynomialSymbol::evaluate(const KPoint& k) const {
  ComplexMatrix h = ComplexMatrix::Zero(n_, n_);
  for (const auto& t : terms_) {
    const double phase = t.m1 * k[0] + (d_ == 2 ? t.m2 * k[1] : 0.0);
    h(t.row, t.col) += t.coeff * std::polar(1.0, phase);
  }
  return h;
}

MatrixSymbol::MatrixSymbol(Index fiber_dim, int torus_dim, MatrixField fn)
    : n_(fiber_dim), d_(torus_dim), fn_(std::move(fn)) {
  if (n_ < 1) fail(Errc::InvalidSymbol, "fiber_dim must be positive");
  if (d_ != 1 && d_ != 2) fail(Errc::InvalidSymbol, "torus dimension must be 1 or 2");
  if (!fn_) fail(Errc::InvalidSymbol, "MatrixSymbol needs a callable");
}

ComplexMatrix MatrixSymbol::evaluate(const KPoint& k) const {
  ComplexMatrix h = fn_(k);
  if (h.rows() != n_ || h.cols() != n_) fail(Errc::DimensionMismatch, "symbol returned a matrix of the wrong size");
  return h;
}

TrigPolynomialSymbol random_trig_polynomial(Index fiber_dim, int torus_dim, int order, Rng& rng) {
  if (order < 0) fail(Errc::InvalidArgument, "order must be non-negative");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<FourierTerm> terms;
  const int m2_max = torus_dim == 2 ? order : 0;
  // Draw c_ij(m) for (i < j, all m) and (i == j, m >= 0 lexicographically);
  // the partners follow by conjugation.
  for (Index i = 0; i < fiber_dim; ++i)
    for (Index j = i; j < fiber_dim; ++j)
      for (int m1 = -order; m1 <= order; ++m1)
        for (int m2 = -m2_max; m2 <= m2_max; ++m2) {
          const bool diag = i == j;
          if (diag && (m1 < 0 || (m1 == 0 && m2 < 0))) continue;
          const double s = 1.0 / (1.0 + m1 * m1 + m2 * m2);
          Complex c(normal(rng) * s, normal(rng) * s);
          if (diag && m1 == 0 && m2 == 0) c = c.real();
          terms.push_back({i, j, m1, m2, c});
          if (!(diag && m1 == 0 && m2 == 0)) terms.push_back({j, i, -m1, -m2, std::conj(c)});
        }
  return TrigPolynomialSymbol(fiber_dim, torus_dim, std::move(terms));
}

}  // namespace fermi
