#pragma once

// Pushforward measures, Radon-Nikodym densities, expectation operators and
// fiber measures for C^1 maps on an interval, plus the two planar cases with
// closed structure (product projection and the difference map on a square).

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace fermi {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double span() const noexcept { return hi - lo; }
  bool contains(double x, double slack = 0.0) const noexcept { return x >= lo - slack && x <= hi + slack; }
};

using RealFunction = std::function<double(double)>;
using RealFunction2 = std::function<double(double, double)>;

/// A scalar function on [a, b] with its values sampled on a uniform grid of
/// `grid_size` nodes (endpoints included). The callable is kept so that
/// preimages and critical points can be refined beyond the grid.
class GridFunction1D {
 public:
  GridFunction1D(Interval domain, RealFunction value, std::size_t grid_size, RealFunction derivative = {});

  const Interval& domain() const noexcept { return domain_; }
  std::size_t grid_size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }

  double operator()(double x) const { return value_(x); }
  /// Analytic derivative when supplied, central difference otherwise.
  double derivative(double x) const;

 private:
  Interval domain_;
  RealFunction value_;
  RealFunction derivative_;
  std::vector<double> nodes_;
  std::vector<double> samples_;
};

struct DisintegrationOptions {
  /// |f'| at or below this marks a critical preimage. Negative selects the
  /// default 1e-6 * span(range) / span(domain).
  double grad_floor = -1.0;
  /// Preimages and critical points are bisected to this fraction of the
  /// domain span.
  double root_tol = 1e-13;
};

struct FiberAtom {
  std::array<double, 2> point{};  // 1-D fibers use point[0]
  double weight = 0.0;
};

enum class FiberKind { atomic, curve };

/// A probability measure on the preimage of `level`.
struct FiberMeasure {
  double level = 0.0;
  FiberKind kind = FiberKind::atomic;
  std::vector<FiberAtom> atoms;

  double total_weight() const;
};

struct PushforwardDensity {
  Interval range;
  std::vector<double> y;        // cell-centred sample levels
  std::vector<double> density;  // rho(y)
  double total_mass = 0.0;      // integral of rho over the range
};

/// A C^1 map on an interval split into monotone branches at its critical
/// points, together with the probability measure it pushes forward.
class BranchMap {
 public:
  /// `source_density` is the density of mu with respect to Lebesgue measure
  /// on the domain; empty means normalized Lebesgue. Throws
  /// UnresolvedCriticalPoints when a grid cell hides two sign changes of f'
  /// and InvalidMeasure when the source density does not integrate to one.
  explicit BranchMap(GridFunction1D f, RealFunction source_density = {}, DisintegrationOptions options = {});

  const GridFunction1D& function() const noexcept { return f_; }
  Interval range() const noexcept { return range_; }
  /// Domain endpoints and interior critical points, ascending.
  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  /// Images of the breakpoints, ascending and deduplicated.
  const std::vector<double>& critical_values() const noexcept { return critical_values_; }
  double grad_floor() const noexcept { return grad_floor_; }

  double source_density(double x) const;
  std::vector<double> preimages(double y) const;

  /// rho(y) = sum over preimages of mu(x) / |f'(x)|.
  double pushforward_density(double y) const;

  /// E_psi(y) = sum_x c_x psi(x), c_x proportional to mu(x) / |f'(x)|.
  double expectation(double y, const RealFunction& psi) const;

  /// Fiber at a regular value. Throws EmptyFiber outside the range and
  /// CriticalValue when some preimage has |f'| <= grad_floor.
  FiberMeasure fiber(double y) const;

  /// Integral of g against mu (adaptive Gauss-Kronrod on each branch).
  double integrate_source(const RealFunction& g) const;
  /// Integral of rho(y) g(y) dy over the range, between consecutive
  /// critical values, after a substitution that smooths the 1/sqrt blow-ups.
  double integrate_pushforward(const RealFunction& g) const;

 private:
  double raw_weight(double x) const;

  GridFunction1D f_;
  RealFunction source_;
  DisintegrationOptions options_;
  std::vector<double> breaks_;
  std::vector<double> critical_values_;
  Interval range_;
  double grad_floor_ = 0.0;
  double slope_floor_ = 0.0;
};

PushforwardDensity pushforward_1d(const BranchMap& map, std::size_t samples = 0);

/// E_psi sampled over the range of the map, returned as a function on it.
GridFunction1D expectation_operator(const BranchMap& map, RealFunction psi);

inline FiberMeasure disintegrate_1d(const BranchMap& map, double y) { return map.fiber(y); }

struct CompositionReport {
  double defect = 0.0;            // sup |E^{g o f}_psi - E^g E^f_psi| over the check levels
  std::vector<double> levels;
  std::vector<double> direct;     // E^{g o f}_psi
  std::vector<double> composed;   // E^g applied to E^f_psi
};

/// Compares the expectation operator of g o f with the composition of the
/// operators of f and g, where E^g is taken with respect to the pushforward
/// of mu by f. Throws RangeMismatch if g is not defined on the range of f.
CompositionReport compose_expectations(const GridFunction1D& f, const GridFunction1D& g, const RealFunction& psi,
                                       RealFunction source_density = {}, std::size_t check_levels = 0);

/// |integral psi dmu - integral dnu(y) integral psi dmu_y|.
double verify_fubini(const BranchMap& map, const RealFunction& psi);

/// Projection (x1, x2) -> x1 on a product of normalized intervals; the
/// fibers are delta_{x1} x mu_2.
class ProductProjection {
 public:
  ProductProjection(Interval first, Interval second);

  double expectation(double x1, const RealFunction2& psi) const;
  /// 32-point Gauss-Legendre nodes on {x1} x I2.
  FiberMeasure fiber(double x1) const;
  /// |integral psi d(mu1 x mu2) - integral dmu1 E_psi|, the left side by a
  /// tensor Gauss-Legendre rule, the right side by nested adaptive rules.
  double verify_fubini(const RealFunction2& psi) const;

 private:
  Interval first_;
  Interval second_;
};

/// f(x1, x2) = x2 - x1 on [0, ell]^2 with normalized Lebesgue measure.
class SquareDifferenceMap {
 public:
  explicit SquareDifferenceMap(double ell);

  double ell() const noexcept { return ell_; }
  Interval range() const noexcept { return {-ell_, ell_}; }

  /// Obtained by disintegrating over the first coordinate: for fixed x1 = s
  /// the map x2 -> x2 - s pushes mu_2 to (1/ell) chi_[-s, ell-s].
  double pushforward_density(double y) const;
  PushforwardDensity pushforward(std::size_t samples) const;

  /// Uniform average of psi along the segment x2 - x1 = y inside the square.
  double expectation(double y, const RealFunction2& psi) const;
  /// 32-point Gauss-Legendre nodes on the segment; weights sum to one.
  FiberMeasure fiber(double y) const;

 private:
  double ell_;
};

}  // namespace fermi
