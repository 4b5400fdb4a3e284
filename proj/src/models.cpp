#include "fermi/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

constexpr double kPi = std::numbers::pi;

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    std::ostringstream os;
    os << "stagger potential must be positive, got " << gamma;
    fail(Errc::NonPositiveGamma, os.str());
  }
}

Complex trace_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.transpose().cwiseProduct(y)).sum();
}

}  // namespace

std::shared_ptr<const TrigPolynomialSymbol> graphene_symbol(double gamma) {
  require_gamma(gamma);
  std::vector<FourierTerm> terms{
      {0, 0, 0, 0, gamma},  {1, 1, 0, 0, -gamma}, {0, 1, -1, 0, 1.0},
      {0, 1, 0, -1, 1.0},   {1, 0, 1, 0, 1.0},    {1, 0, 0, 1, 1.0},
  };
  return std::make_shared<const TrigPolynomialSymbol>(2, 2, std::move(terms));
}

double graphene_upper_band(double gamma, const KPoint& k) {
  const double c = std::cos(0.5 * (k[0] - k[1]));
  return std::sqrt(gamma * gamma + 4.0 * c * c);
}

ComplexMatrix graphene_projection(double gamma, const KPoint& k, int sign) {
  require_gamma(gamma);
  if (sign != 1 && sign != -1) fail(Errc::InvalidArgument, "band sign must be +1 or -1");
  const Complex off = std::polar(1.0, -k[0]) + std::polar(1.0, -k[1]);
  ComplexMatrix h(2, 2);
  h << gamma, off, std::conj(off), -gamma;
  const double eps = graphene_upper_band(gamma, k);
  return 0.5 * ComplexMatrix::Identity(2, 2) + (sign / (2.0 * eps)) * h;
}

GridFunction1D graphene_profile(double gamma, std::size_t grid) {
  require_gamma(gamma);
  return GridFunction1D(
      {-2.0 * kPi, 2.0 * kPi},
      [gamma](double y) {
        const double c = std::cos(0.5 * y);
        return std::sqrt(gamma * gamma + 4.0 * c * c);
      },
      grid,
      [gamma](double y) {
        const double c = std::cos(0.5 * y);
        return -std::sin(y) / std::sqrt(gamma * gamma + 4.0 * c * c);
      });
}

double LineSegment::length() const { return std::hypot(direction[0], direction[1]); }

GrapheneFermiLines graphene_fermi_analytic(double gamma, double lambda, LineWeights weights) {
  require_gamma(gamma);
  const double top = std::sqrt(gamma * gamma + 4.0);
  const double level = std::abs(lambda);
  if (!(level >= gamma && level <= top)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " lies outside the bands +-[" << gamma << ", " << top << "]";
    fail(Errc::LambdaOutOfBand, os.str());
  }
  const double edge_tol = 1e-12 * top;
  if (level - gamma <= edge_tol || top - level <= edge_tol) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is a band edge";
    fail(Errc::ExtremeLevel, os.str());
  }

  GrapheneFermiLines out;
  out.band_sign = lambda > 0.0 ? 1 : -1;
  const double theta = std::acos(std::sqrt(level * level - gamma * gamma) / 2.0);
  out.theta = theta;
  const double a = 2.0 * kPi - 2.0 * theta;
  const double b = 2.0 * theta;
  const double wl = weights == LineWeights::haar ? (kPi - theta) / (2.0 * kPi) : 0.25;
  const double wg = weights == LineWeights::haar ? theta / (2.0 * kPi) : 0.25;
  out.lines = {LineSegment{"L+", {0.0, b}, {a, a}, wl}, LineSegment{"L-", {b, 0.0}, {a, a}, wl},
               LineSegment{"G+", {0.0, a}, {b, b}, wg}, LineSegment{"G-", {a, 0.0}, {b, b}, wg}};
  return out;
}

Complex graphene_state_analytic(double gamma, double lambda, const MatrixField& a, LineWeights weights) {
  const GrapheneFermiLines lines = graphene_fermi_analytic(gamma, lambda, weights);
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  Complex total{};
  for (const auto& line : lines.lines) {
    auto integrand = [&](double tau) {
      const KPoint k = line.at(tau);
      return trace_product(graphene_projection(gamma, k, lines.band_sign), a(k));
    };
    const double re = rule::integrate([&](double t) { return integrand(t).real(); }, 0.0, 1.0, 15, 1e-10);
    const double im = rule::integrate([&](double t) { return integrand(t).imag(); }, 0.0, 1.0, 15, 1e-10);
    total += line.weight * Complex(re, im);
  }
  return total;
}

std::shared_ptr<const TrigPolynomialSymbol> crossing_symbol() {
  // sin k1 = (e^{ik1} - e^{-ik1}) / 2i.
  const Complex up(0.0, -0.5);
  std::vector<FourierTerm> terms{
      {0, 0, 1, 0, up}, {0, 0, -1, 0, std::conj(up)}, {1, 1, 1, 0, 2.0 * up}, {1, 1, -1, 0, 2.0 * std::conj(up)}};
  return std::make_shared<const TrigPolynomialSymbol>(2, 2, std::move(terms));
}

std::shared_ptr<const TrigPolynomialSymbol> square_two_band(double t) {
  if (!std::isfinite(t)) fail(Errc::InvalidArgument, "hopping must be finite");
  std::vector<FourierTerm> terms;
  for (int s : {1, -1}) {
    terms.push_back({0, 0, s, 0, 0.5});
    terms.push_back({0, 0, 0, s, 0.5});
    terms.push_back({1, 1, s, 0, -0.5});
    terms.push_back({1, 1, 0, s, -0.5});
  }
  terms.push_back({0, 1, 0, 0, t});
  terms.push_back({1, 0, 0, 0, t});
  return std::make_shared<const TrigPolynomialSymbol>(2, 2, std::move(terms));
}

ComplexMatrix truncated_shift(Index n) {
  if (n < 2) fail(Errc::InvalidArgument, "truncated shift needs N >= 2");
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) s(i + 1, i) = 1.0;
  return s;
}

}  // namespace fermi
