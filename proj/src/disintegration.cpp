#include "fermi/disintegration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fermi/errors.hpp"

namespace fermi {

namespace bq = boost::math::quadrature;

namespace {

constexpr double kQuadTol = 1e-12;
constexpr double kSourceMassTol = 1e-5;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double gk_integrate(const RealFunction& g, double a, double b) {
  if (!(b > a)) return 0.0;
  return bq::gauss_kronrod<double, 31>::integrate(g, a, b, 15, kQuadTol);
}

// y = a + (b - a)(1 - cos(pi u)) / 2 turns the inverse square-root blow-up
// of a density at a critical value into a bounded integrand.
double gk_cosine(const RealFunction& g, double a, double b) {
  if (!(b > a)) return 0.0;
  const double half = 0.5 * (b - a);
  // The substituted integrand is bounded and smooth in u, but within rounding
  // of a critical value the roots are not resolved. Holding u off the ends by
  // delta changes the result by O(delta^2).
  constexpr double delta = 1e-5;
  return gk_integrate(
      [&](double u) {
        u = std::clamp(u, delta, 1.0 - delta);
        const double c = std::cos(std::numbers::pi * u);
        return g(a + half * (1.0 - c)) * half * std::numbers::pi * std::sin(std::numbers::pi * u);
      },
      0.0, 1.0);
}

// Nodes and weights of the 32-point Gauss-Legendre rule on [-1, 1].
void gauss32(std::vector<double>& nodes, std::vector<double>& weights) {
  using rule = bq::gauss<double, 32>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  nodes.clear();
  weights.clear();
  for (std::size_t i = x.size(); i-- > 0;) {
    nodes.push_back(-x[i]);
    weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back(x[i]);
    weights.push_back(w[i]);
  }
}

FiberMeasure segment_fiber(double level, std::array<double, 2> p, std::array<double, 2> q) {
  FiberMeasure fib;
  fib.level = level;
  fib.kind = FiberKind::curve;
  if (p == q) {
    fib.atoms.push_back({p, 1.0});
    return fib;
  }
  std::vector<double> t;
  std::vector<double> w;
  gauss32(t, w);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = 0.5 * (t[i] + 1.0);
    fib.atoms.push_back({{p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])}, 0.5 * w[i]});
  }
  return fib;
}

}  // namespace

double FiberMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

GridFunction1D::GridFunction1D(Interval domain, RealFunction value, std::size_t grid_size, RealFunction derivative)
    : domain_(domain), value_(std::move(value)), derivative_(std::move(derivative)) {
  if (!value_) fail(Errc::InvalidArgument, "GridFunction1D needs a callable");
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || !(domain.hi > domain.lo))
    fail(Errc::InvalidArgument, "GridFunction1D needs a finite interval with lo < hi");
  if (grid_size < 2) fail(Errc::InvalidArgument, "GridFunction1D needs at least two grid nodes");
  nodes_.resize(grid_size);
  samples_.resize(grid_size);
  const double step = domain.span() / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    nodes_[i] = i + 1 == grid_size ? domain.hi : domain.lo + step * static_cast<double>(i);
    samples_[i] = value_(nodes_[i]);
    if (!std::isfinite(samples_[i])) {
      std::ostringstream os;
      os << "non-finite sample at x = " << nodes_[i];
      fail(Errc::InvalidArgument, os.str());
    }
  }
}

double GridFunction1D::derivative(double x) const {
  if (derivative_) return derivative_(x);
  const double h = 6e-6 * domain_.span();
  const double a = std::max(domain_.lo, x - h);
  const double b = std::min(domain_.hi, x + h);
  return (value_(b) - value_(a)) / (b - a);
}

BranchMap::BranchMap(GridFunction1D f, RealFunction source_density, DisintegrationOptions options)
    : f_(std::move(f)), source_(std::move(source_density)), options_(options) {
  const Interval dom = f_.domain();
  const auto& x = f_.nodes();
  const std::size_t n = x.size();
  const double tol_x = options_.root_tol * dom.span();

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = f_.derivative(x[i]);

  auto bisect_derivative = [&](double a, double b) {
    const int sa = sign_of(f_.derivative(a));
    for (int it = 0; it < 200 && b - a > tol_x; ++it) {
      const double m = 0.5 * (a + b);
      (sign_of(f_.derivative(m)) == sa ? a : b) = m;
    }
    return 0.5 * (a + b);
  };

  std::vector<double> critical;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int s0 = sign_of(d[i]);
    const int s1 = sign_of(d[i + 1]);
    const int sm = sign_of(f_.derivative(0.5 * (x[i] + x[i + 1])));
    if (s0 != 0 && s0 == s1 && sm == -s0) {
      std::ostringstream os;
      os << "f' changes sign twice inside [" << x[i] << ", " << x[i + 1] << "]; refine the grid";
      fail(Errc::UnresolvedCriticalPoints, os.str());
    }
    if (s0 * s1 < 0) {
      critical.push_back(bisect_derivative(x[i], x[i + 1]));
    } else if (s1 == 0 && i + 2 < n) {
      critical.push_back(x[i + 1]);
    }
  }

  // Drop critical points that coincide with each other or with the ends.
  const double merge = 1e-9 * dom.span();
  breaks_.push_back(dom.lo);
  for (double c : critical)
    if (c - breaks_.back() > merge && dom.hi - c > merge) breaks_.push_back(c);
  breaks_.push_back(dom.hi);

  std::vector<double> values;
  values.reserve(breaks_.size());
  for (double b : breaks_) values.push_back(f_(b));
  range_ = {*std::min_element(values.begin(), values.end()), *std::max_element(values.begin(), values.end())};
  if (!(range_.span() > 0.0)) fail(Errc::InvalidArgument, "the map is constant on its domain");
  std::sort(values.begin(), values.end());
  const double vmerge = 1e-14 * std::max(1.0, std::max(std::abs(range_.lo), std::abs(range_.hi)));
  for (double v : values)
    if (critical_values_.empty() || v - critical_values_.back() > vmerge) critical_values_.push_back(v);

  grad_floor_ = options_.grad_floor >= 0.0 ? options_.grad_floor : 1e-6 * range_.span() / dom.span();
  // Within rounding of a critical value the root, and so |f'| there, is only
  // known to about sqrt(eps); never divide by less.
  slope_floor_ = std::sqrt(std::numeric_limits<double>::epsilon()) * range_.span() / dom.span();

  if (source_) {
    for (double xi : x)
      if (!(source_(xi) >= 0.0)) fail(Errc::InvalidMeasure, "source density is negative or not finite");
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) mass += gk_cosine(source_, breaks_[k], breaks_[k + 1]);
    if (std::abs(mass - 1.0) > kSourceMassTol) {
      std::ostringstream os;
      os << "source density integrates to " << mass << ", not 1";
      fail(Errc::InvalidMeasure, os.str());
    }
  }
}

double BranchMap::source_density(double x) const {
  if (source_) return source_(x);
  return 1.0 / f_.domain().span();
}

double BranchMap::raw_weight(double x) const {
  return source_density(x) / std::max(std::abs(f_.derivative(x)), slope_floor_);
}

std::vector<double> BranchMap::preimages(double y) const {
  const double tol_x = options_.root_tol * f_.domain().span();
  // Critical values are images of bisected points; accept ends that miss y by
  // rounding only.
  const double vtol = 1e-14 * std::max({1.0, std::abs(range_.lo), std::abs(range_.hi)});
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
    double a = breaks_[k];
    double b = breaks_[k + 1];
    double fa = f_(a) - y;
    double fb = f_(b) - y;
    if (std::abs(fa) <= vtol) fa = 0.0;
    if (std::abs(fb) <= vtol) fb = 0.0;
    if (fa == 0.0) roots.push_back(a);
    if (fb == 0.0) roots.push_back(b);
    if (fa == 0.0 || fb == 0.0 || sign_of(fa) == sign_of(fb)) continue;
    const int sa = sign_of(fa);
    for (int it = 0; it < 200 && b - a > tol_x; ++it) {
      const double m = 0.5 * (a + b);
      (sign_of(f_(m) - y) == sa ? a : b) = m;
    }
    roots.push_back(0.5 * (a + b));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || r - unique.back() > 4.0 * tol_x) unique.push_back(r);
  return unique;
}

double BranchMap::pushforward_density(double y) const {
  double rho = 0.0;
  for (double x : preimages(y)) rho += raw_weight(x);
  return rho;
}

double BranchMap::expectation(double y, const RealFunction& psi) const {
  const auto roots = preimages(y);
  if (roots.empty()) {
    std::ostringstream os;
    os << "level " << y << " has no preimage";
    fail(Errc::EmptyFiber, os.str());
  }
  double total = 0.0;
  double acc = 0.0;
  for (double x : roots) {
    const double w = raw_weight(x);
    total += w;
    acc += w * psi(x);
  }
  if (!(total > 0.0)) fail(Errc::InvalidMeasure, "fiber carries no source mass");
  return acc / total;
}

FiberMeasure BranchMap::fiber(double y) const {
  if (!range_.contains(y, 1e-12 * range_.span())) {
    std::ostringstream os;
    os << "level " << y << " lies outside the range [" << range_.lo << ", " << range_.hi << "]";
    fail(Errc::EmptyFiber, os.str());
  }
  const auto roots = preimages(y);
  if (roots.empty()) fail(Errc::EmptyFiber, "level has no preimage");
  FiberMeasure fib;
  fib.level = y;
  fib.kind = FiberKind::atomic;
  double total = 0.0;
  for (double x : roots) {
    const double slope = std::abs(f_.derivative(x));
    if (slope <= grad_floor_) {
      std::ostringstream os;
      os << "level " << y << " is critical: |f'(" << x << ")| = " << slope;
      fail(Errc::CriticalValue, os.str());
    }
    const double w = source_density(x) / slope;
    fib.atoms.push_back({{x, 0.0}, w});
    total += w;
  }
  if (!(total > 0.0)) fail(Errc::InvalidMeasure, "fiber carries no source mass");
  for (auto& a : fib.atoms) a.weight /= total;
  return fib;
}

double BranchMap::integrate_source(const RealFunction& g) const {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
    acc += gk_integrate([&](double x) { return g(x) * source_density(x); }, breaks_[k], breaks_[k + 1]);
  return acc;
}

double BranchMap::integrate_pushforward(const RealFunction& g) const {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < critical_values_.size(); ++k)
    acc += gk_cosine([&](double y) { return pushforward_density(y) * g(y); }, critical_values_[k],
                        critical_values_[k + 1]);
  return acc;
}

PushforwardDensity pushforward_1d(const BranchMap& map, std::size_t samples) {
  if (samples == 0) samples = map.function().grid_size();
  PushforwardDensity out;
  out.range = map.range();
  out.y.resize(samples);
  out.density.resize(samples);
  const double step = out.range.span() / static_cast<double>(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    out.y[i] = out.range.lo + (static_cast<double>(i) + 0.5) * step;
    out.density[i] = map.pushforward_density(out.y[i]);
  }
  out.total_mass = map.integrate_pushforward([](double) { return 1.0; });
  return out;
}

GridFunction1D expectation_operator(const BranchMap& map, RealFunction psi) {
  return GridFunction1D(
      map.range(), [map, psi = std::move(psi)](double y) { return map.expectation(y, psi); },
      map.function().grid_size());
}

CompositionReport compose_expectations(const GridFunction1D& f, const GridFunction1D& g, const RealFunction& psi,
                                       RealFunction source_density, std::size_t check_levels) {
  const BranchMap fm(f, source_density);
  const Interval rf = fm.range();
  const double slack = 1e-9 * std::max(1.0, rf.span());
  if (!g.domain().contains(rf.lo, slack) || !g.domain().contains(rf.hi, slack)) {
    std::ostringstream os;
    os << "g is defined on [" << g.domain().lo << ", " << g.domain().hi << "] but f has range [" << rf.lo << ", "
       << rf.hi << "]";
    fail(Errc::RangeMismatch, os.str());
  }

  const GridFunction1D g_on_range(
      rf, [g](double y) { return g(y); }, g.grid_size(), [g](double y) { return g.derivative(y); });
  const BranchMap gm(g_on_range, [fm](double y) { return fm.pushforward_density(y); });

  const GridFunction1D h(
      f.domain(), [f, g](double x) { return g(f(x)); }, f.grid_size(),
      [f, g](double x) { return g.derivative(f(x)) * f.derivative(x); });
  const BranchMap hm(h, source_density);

  if (check_levels == 0) check_levels = h.grid_size();
  const Interval rh = hm.range();
  const double step = rh.span() / static_cast<double>(check_levels);
  const RealFunction inner = [&fm, &psi](double y) { return fm.expectation(y, psi); };

  CompositionReport report;
  for (std::size_t i = 0; i < check_levels; ++i) {
    const double z = rh.lo + (static_cast<double>(i) + 0.5) * step;
    const double direct = hm.expectation(z, psi);
    const double composed = gm.expectation(z, inner);
    report.levels.push_back(z);
    report.direct.push_back(direct);
    report.composed.push_back(composed);
    report.defect = std::max(report.defect, std::abs(direct - composed));
  }
  return report;
}

double verify_fubini(const BranchMap& map, const RealFunction& psi) {
  const double lhs = map.integrate_source(psi);
  const double rhs = map.integrate_pushforward([&](double y) { return map.expectation(y, psi); });
  return std::abs(lhs - rhs);
}

ProductProjection::ProductProjection(Interval first, Interval second) : first_(first), second_(second) {
  if (!(first.span() > 0.0) || !(second.span() > 0.0))
    fail(Errc::InvalidArgument, "product factors need non-degenerate intervals");
}

double ProductProjection::expectation(double x1, const RealFunction2& psi) const {
  return gk_integrate([&](double x2) { return psi(x1, x2); }, second_.lo, second_.hi) / second_.span();
}

FiberMeasure ProductProjection::fiber(double x1) const {
  if (!first_.contains(x1)) fail(Errc::EmptyFiber, "point outside the first factor");
  return segment_fiber(x1, {x1, second_.lo}, {x1, second_.hi});
}

double ProductProjection::verify_fubini(const RealFunction2& psi) const {
  using rule = bq::gauss<double, 40>;
  const double c1 = 0.5 * (first_.lo + first_.hi);
  const double h1 = 0.5 * first_.span();
  const double c2 = 0.5 * (second_.lo + second_.hi);
  const double h2 = 0.5 * second_.span();
  const double direct = rule::integrate(
                            [&](double u) {
                              return rule::integrate([&](double v) { return psi(c1 + h1 * u, c2 + h2 * v); }, -1.0,
                                                     1.0);
                            },
                            -1.0, 1.0) /
                        4.0;
  const double nested =
      gk_integrate([&](double x1) { return expectation(x1, psi); }, first_.lo, first_.hi) / first_.span();
  return std::abs(direct - nested);
}

SquareDifferenceMap::SquareDifferenceMap(double ell) : ell_(ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) fail(Errc::InvalidArgument, "side length must be positive");
}

double SquareDifferenceMap::pushforward_density(double y) const {
  if (std::abs(y) > ell_) return 0.0;
  // rho(y) = (1/ell) int_0^ell ds (1/ell) chi_[-s, ell-s](y); the indicator
  // switches at s = -y and s = ell - y.
  std::vector<double> cuts{0.0, ell_};
  for (double c : {-y, ell_ - y})
    if (c > 0.0 && c < ell_) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    acc += gk_integrate([&](double s) { return (y >= -s && y <= ell_ - s) ? 1.0 / ell_ : 0.0; }, cuts[k],
                        cuts[k + 1]);
  return acc / ell_;
}

PushforwardDensity SquareDifferenceMap::pushforward(std::size_t samples) const {
  if (samples == 0) fail(Errc::InvalidArgument, "pushforward needs at least one sample");
  PushforwardDensity out;
  out.range = range();
  const double step = out.range.span() / static_cast<double>(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double y = out.range.lo + (static_cast<double>(i) + 0.5) * step;
    out.y.push_back(y);
    out.density.push_back(pushforward_density(y));
  }
  const RealFunction rho = [this](double y) { return pushforward_density(y); };
  out.total_mass = gk_integrate(rho, -ell_, 0.0) + gk_integrate(rho, 0.0, ell_);
  return out;
}

double SquareDifferenceMap::expectation(double y, const RealFunction2& psi) const {
  if (std::abs(y) > ell_) fail(Errc::EmptyFiber, "level outside [-ell, ell]");
  const double s0 = std::max(0.0, -y);
  const double s1 = std::min(ell_, ell_ - y);
  if (!(s1 > s0)) return psi(s0, s0 + y);
  return gk_integrate([&](double s) { return psi(s, s + y); }, s0, s1) / (s1 - s0);
}

FiberMeasure SquareDifferenceMap::fiber(double y) const {
  if (std::abs(y) > ell_) fail(Errc::EmptyFiber, "level outside [-ell, ell]");
  const double s0 = std::max(0.0, -y);
  const double s1 = std::min(ell_, ell_ - y);
  return segment_fiber(y, {s0, s0 + y}, {s1, s1 + y});
}

}  // namespace fermi
