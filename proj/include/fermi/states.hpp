#pragma once

// States on Mat_n(C), represented by density matrices, and the algebraic
// eigenstate tests built on them.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fermi/hermitian.hpp"

namespace fermi {

/// omega(A) = Tr(rho A) with rho positive semidefinite and of unit trace.
class DensityState {
 public:
  /// Throws InvalidState unless rho is Hermitian, PSD (min eigenvalue
  /// >= -1e-12) and Tr(rho) = 1 +- 1e-12.
  explicit DensityState(const ComplexMatrix& rho);

  /// v v* / |v|^2.
  static DensityState pure(const ComplexVector& v);
  /// sum_i w_i v_i v_i* with the weights normalized to sum one.
  static DensityState mixture(std::span<const ComplexVector> vectors, std::span<const double> weights);
  static DensityState maximally_mixed(Index n);

  const HermitianMatrix& rho() const noexcept { return rho_; }
  Index dim() const noexcept { return rho_.dim(); }

  Complex operator()(const ComplexMatrix& a) const;

  double purity() const;
  bool is_pure(double tol = 1e-10) const { return purity() >= 1.0 - tol; }

 private:
  HermitianMatrix rho_;
};

struct EigenstateReport {
  Complex lambda;            // omega(A)
  double quadratic_defect;   // omega((A - lambda)^* (A - lambda))
  double max_linear_defect;  // max_B |omega(BA) - lambda omega(B)|
  bool pass;                 // quadratic_defect <= tol
};

/// identity, A, A*, then `random_count` Ginibre matrices from `seed`.
std::vector<ComplexMatrix> default_probes(const ComplexMatrix& a, std::uint64_t seed = 20240601,
                                          int random_count = 20);

/// The quadratic defect decides the verdict; the linear defects over probes
/// are diagnostic.
EigenstateReport check_eigenstate(const DensityState& omega, const ComplexMatrix& a, double tol,
                                  std::span<const ComplexMatrix> probes);

struct NormalAdjointReport {
  EigenstateReport forward;
  EigenstateReport adjoint;
  bool pass;  // forward.pass implies (adjoint.pass and adjoint.lambda == conj(forward.lambda))
};

NormalAdjointReport check_normal_adjoint(const DensityState& omega, const ComplexMatrix& a, double tol);

struct FunctionalCalculusReport {
  Complex expected;           // f(lambda)
  EigenstateReport transformed;  // check_eigenstate(omega, f(A))
  double max_commutator;      // max_B |omega([B, f(A)])|
  bool pass;
};

/// Requires A normal (NotNormal) and omega an eigenstate of A (NotEigenstate).
/// Linear quantities are compared against sqrt(tol) scaled by the probe norm,
/// the Cauchy-Schwarz image of the quadratic tolerance.
FunctionalCalculusReport check_functional_calculus(const DensityState& omega, const ComplexMatrix& a,
                                                   const std::function<Complex(Complex)>& f, double tol,
                                                   std::span<const ComplexMatrix> probes);

/// GNS triple of a state on Mat_n: the quotient Mat_n / N_omega with
/// <A, B> = omega(A* B), realized by Gram-Schmidt over the matrix units.
class GnsRepresentation {
 public:
  explicit GnsRepresentation(const DensityState& omega, double discard_norm = 1e-10);

  Index gns_dim() const noexcept { return static_cast<Index>(basis_.size()); }
  /// Orthonormal representatives B_k of the quotient classes.
  const std::vector<ComplexMatrix>& basis() const noexcept { return basis_; }
  /// pi(A)_{kl} = omega(B_k* A B_l).
  ComplexMatrix represent(const ComplexMatrix& a) const;
  /// Coordinates of the class of the identity.
  const ComplexVector& cyclic_vector() const noexcept { return cyclic_; }
  /// <psi, pi(A) psi>.
  Complex vector_expectation(const ComplexMatrix& a) const;

 private:
  DensityState omega_;
  std::vector<ComplexMatrix> basis_;
  ComplexVector cyclic_;
};

inline GnsRepresentation gns(const DensityState& omega) { return GnsRepresentation(omega); }

/// omega_P(A) = omega(PAP) / omega(P).
DensityState compress_state(const DensityState& omega, const HermitianMatrix& p);

struct ProjectionEquivalence {
  double weight;              // omega(P)
  bool compressed_equals;     // omega_P == omega
  bool eigenstate_of_p;       // eigenstate of P with eigenvalue 1
  bool full_weight;           // omega(P) == 1
};

/// The three conditions are evaluated independently so callers can verify
/// that they agree.
ProjectionEquivalence projection_equivalences(const DensityState& omega, const HermitianMatrix& p, double tol = 1e-10);

/// Smallest singular value of G_ij = Tr(rho_i rho_j).
double independence_gram(std::span<const DensityState> states);

/// Trace norm of rho1 - rho2; equals 2 exactly for orthogonal states.
double state_distance(const DensityState& omega1, const DensityState& omega2);

}  // namespace fermi
