#pragma once

// Heisenberg dynamics alpha_t(A) = e^{itH} A e^{-itH}, its generator
// delta_H(A) = i[H, A], and probe-set certificates for invariance,
// ground-state positivity and the gap inequality.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fermi/hermitian.hpp"
#include "fermi/states.hpp"

namespace fermi {

ComplexMatrix evolve(const ComplexMatrix& a, const HermitianMatrix& h, double t);

ComplexMatrix derivation(const HermitianMatrix& h, const ComplexMatrix& a);

/// Identity, all matrix units e_i e_j*, then `random_count` Ginibre matrices.
std::vector<ComplexMatrix> default_dynamics_probes(Index n, std::uint64_t seed = 20240602, int random_count = 20);

/// max over probes of |omega(delta_H(A))|.
double invariance_defect(const DensityState& omega, const HermitianMatrix& h, std::span<const ComplexMatrix> probes);

struct DynamicsProbeReport {
  double invariance_defect = 0.0;
  double ground_defect = 0.0;  // min_A Re(-i omega(A* delta_H(A)))
  double gap_residual = 0.0;   // min_A of the above minus delta (omega(A*A) - |omega(A)|^2)
  double delta = 0.0;
  double energy = 0.0;         // omega(H)
  double gns_min_energy = 0.0; // min Spec(pi_omega(H))
  bool energy_is_gns_minimum = false;
};

DynamicsProbeReport ground_certificate(const DensityState& omega, const HermitianMatrix& h,
                                       std::span<const ComplexMatrix> probes);

/// Throws NonPositiveDelta for delta <= 0.
DynamicsProbeReport gap_certificate(const DensityState& omega, const HermitianMatrix& h, double delta,
                                    std::span<const ComplexMatrix> probes);

/// Bisection for the largest delta in (0, upper] whose gap residual stays
/// >= -residual_tol. Returns 0 if even delta -> 0 fails.
double estimate_gap(const DensityState& omega, const HermitianMatrix& h, std::span<const ComplexMatrix> probes,
                    double upper, double residual_tol = 1e-12, double delta_tol = 1e-10);

}  // namespace fermi
