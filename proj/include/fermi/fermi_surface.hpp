#pragma once

// Fermi surfaces of a sampled band structure, the local gap check, the Fermi
// measure obtained by coarea weights, and the Fermi eigenstate functional.

#include <cstddef>
#include <limits>
#include <vector>

#include "fermi/bands.hpp"

namespace fermi {

struct FermiOptions {
  double levelset_tol = 1e-10;  // |eps_band(k) - lambda| allowed at surface nodes
  double grad_floor = 1e-6;     // |grad eps| at or below this is a critical level
  double gap_floor = 1e-6;      // local gap at or below this is a violation
  double fd_step = 1e-3;        // step of the extrapolated central difference for gradients
};

struct SurfaceNode {
  KPoint k{};    // unwrapped along the polyline; may reach 2 pi
  double grad = 0.0;
};

/// Contour piece of one band. Polylines stop where they cross the seams
/// k1 = 0 or k2 = 0 of the fundamental cell, so a closed contour that winds
/// around the torus is reported as one or more open pieces. For 1-D symbols
/// each polyline holds a single point.
struct FermiPolyline {
  Index band = 0;
  bool closed = false;
  std::vector<SurfaceNode> nodes;

  double length() const;
};

struct FermiSurfaceMesh {
  double level = 0.0;
  int torus_dim = 2;
  std::vector<FermiPolyline> polylines;
  std::vector<Index> contributing_bands;
  double min_grad = std::numeric_limits<double>::infinity();

  std::size_t node_count() const;
};

/// Marching squares on every band whose range contains lambda. Crossing
/// points are bisected on the re-diagonalized symbol; saddle cells use the
/// band value at the cell centre. Throws EmptyFermiSurface when no band
/// reaches lambda and CriticalLevel when a node has |grad eps| <= grad_floor.
FermiSurfaceMesh extract_fermi_surface(const BandStructure& bs, double lambda, const FermiOptions& options = {});

/// min over mesh nodes of the distance from lambda to the eigenvalues of H(k)
/// other than the node's own band; +inf for scalar symbols. Throws
/// GapViolation when the result is <= gap_floor.
double check_local_gap(const HermitianSymbol& symbol, const FermiSurfaceMesh& mesh, const FermiOptions& options = {});

struct FermiNode {
  KPoint k{};           // wrapped into [0, 2 pi)
  Index band = 0;
  std::size_t polyline = 0;
  double weight = 0.0;      // normalized
  double raw_weight = 0.0;  // chord length / |grad eps| (1 / |eps'| in 1-D)
  double grad = 0.0;
  ComplexMatrix h;          // H(k)
  ComplexMatrix rho;        // P_lambda(k) / Tr P_lambda(k)
};

struct FermiMeasure {
  double level = 0.0;
  double gap = 0.0;
  int torus_dim = 2;
  std::vector<FermiNode> nodes;
  /// Sum of raw weights: the coarea integral of delta(eps - lambda) over the
  /// torus with Lebesgue measure. Divided by (2 pi)^d it is the density of
  /// states at lambda.
  double raw_mass = 0.0;

  double total_weight() const;
  /// Sum of normalized weights per polyline.
  std::vector<double> polyline_masses(std::size_t polyline_count) const;
};

/// Nodes at chord midpoints of every polyline segment, weights by the coarea
/// rule, normalized in a fixed order. Throws NormalizationFailure if the raw
/// weights do not sum to a positive number.
FermiMeasure fermi_measure(const HermitianSymbol& symbol, const FermiSurfaceMesh& mesh, double gap,
                           const FermiOptions& options = {});

/// omega_lambda(A) = sum_nodes w Tr(rho A(k)).
class FermiEigenstate {
 public:
  explicit FermiEigenstate(FermiMeasure measure);

  double level() const noexcept { return measure_.level; }
  const FermiMeasure& measure() const noexcept { return measure_; }

  Complex operator()(const MatrixField& a) const;
  Complex operator()(const HermitianSymbol& a) const { return (*this)(a.field()); }
  /// omega(H).
  Complex energy() const;
  /// omega((H - lambda)^2).
  double quadratic_defect() const;
  /// |omega(A H) - lambda omega(A)|.
  double linear_defect(const MatrixField& a) const;

 private:
  FermiMeasure measure_;
};

/// Full pipeline: mesh, gap check, measure. Throws ZeroLambda for lambda = 0.
FermiEigenstate fermi_eigenstate(const BandStructure& bs, double lambda, const FermiOptions& options = {});

}  // namespace fermi
