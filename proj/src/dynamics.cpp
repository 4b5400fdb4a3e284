#include "fermi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fermi/errors.hpp"
#include "fermi/random.hpp"

namespace fermi {

namespace {

void require_match(const ComplexMatrix& a, const HermitianMatrix& h) {
  if (a.rows() != h.dim() || a.cols() != h.dim()) fail(Errc::DimensionMismatch, "operator shapes differ");
}

// -i omega(A* delta_H(A)) = omega(A* H A) - omega(A* A H); real for states.
double ground_form(const DensityState& omega, const ComplexMatrix& h, const ComplexMatrix& a) {
  const ComplexMatrix a_star = a.adjoint();
  return (omega(a_star * h * a) - omega(a_star * a * h)).real();
}

double variance_form(const DensityState& omega, const ComplexMatrix& a) {
  return omega(a.adjoint() * a).real() - std::norm(omega(a));
}

}  // namespace

ComplexMatrix evolve(const ComplexMatrix& a, const HermitianMatrix& h, double t) {
  require_match(a, h);
  if (t == 0.0) return a;
  const EigenDecomposition dec = eig_hermitian(h);
  const ComplexMatrix u = apply_function(dec, [t](double e) { return std::polar(1.0, t * e); });
  return u * a * u.adjoint();
}

ComplexMatrix derivation(const HermitianMatrix& h, const ComplexMatrix& a) {
  require_match(a, h);
  const ComplexMatrix& hm = h.matrix();
  return Complex(0.0, 1.0) * (hm * a - a * hm);
}

std::vector<ComplexMatrix> default_dynamics_probes(Index n, std::uint64_t seed, int random_count) {
  std::vector<ComplexMatrix> probes;
  probes.push_back(ComplexMatrix::Identity(n, n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = 1.0;
      probes.push_back(std::move(e));
    }
  Rng rng(seed);
  for (int i = 0; i < random_count; ++i) probes.push_back(ginibre(n, rng));
  return probes;
}

double invariance_defect(const DensityState& omega, const HermitianMatrix& h, std::span<const ComplexMatrix> probes) {
  if (h.dim() != omega.dim()) fail(Errc::DimensionMismatch, "state and Hamiltonian dimensions differ");
  double worst = 0.0;
  for (const auto& a : probes) worst = std::max(worst, std::abs(omega(derivation(h, a))));
  return worst;
}

DynamicsProbeReport ground_certificate(const DensityState& omega, const HermitianMatrix& h,
                                       std::span<const ComplexMatrix> probes) {
  if (h.dim() != omega.dim()) fail(Errc::DimensionMismatch, "state and Hamiltonian dimensions differ");
  DynamicsProbeReport r;
  r.invariance_defect = invariance_defect(omega, h, probes);
  r.ground_defect = std::numeric_limits<double>::infinity();
  for (const auto& a : probes) r.ground_defect = std::min(r.ground_defect, ground_form(omega, h.matrix(), a));
  if (probes.empty()) r.ground_defect = 0.0;

  r.energy = omega(h.matrix()).real();
  const GnsRepresentation rep(omega);
  const ComplexMatrix pi_h = rep.represent(h.matrix());
  r.gns_min_energy = eigenvalues_hermitian(HermitianMatrix(pi_h, 1e-8))(0);
  const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());
  r.energy_is_gns_minimum = std::abs(r.energy - r.gns_min_energy) <= 1e-10 * scale;
  return r;
}

DynamicsProbeReport gap_certificate(const DensityState& omega, const HermitianMatrix& h, double delta,
                                    std::span<const ComplexMatrix> probes) {
  if (!(delta > 0.0)) fail(Errc::NonPositiveDelta, "gap certificate needs delta > 0");
  DynamicsProbeReport r = ground_certificate(omega, h, probes);
  r.delta = delta;
  r.gap_residual = std::numeric_limits<double>::infinity();
  for (const auto& a : probes) {
    const double residual = ground_form(omega, h.matrix(), a) - delta * variance_form(omega, a);
    r.gap_residual = std::min(r.gap_residual, residual);
  }
  if (probes.empty()) r.gap_residual = 0.0;
  return r;
}

double estimate_gap(const DensityState& omega, const HermitianMatrix& h, std::span<const ComplexMatrix> probes,
                    double upper, double residual_tol, double delta_tol) {
  if (!(upper > 0.0)) fail(Errc::NonPositiveDelta, "estimate_gap needs a positive upper bound");
  // The residual is affine and non-increasing in delta, so bisection is exact.
  auto passes = [&](double d) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& a : probes)
      worst = std::min(worst, ground_form(omega, h.matrix(), a) - d * variance_form(omega, a));
    return worst >= -residual_tol;
  };
  if (passes(upper)) return upper;
  double lo = 0.0;
  double hi = upper;
  if (!passes(delta_tol)) return 0.0;
  lo = delta_tol;
  while (hi - lo > delta_tol) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace fermi
