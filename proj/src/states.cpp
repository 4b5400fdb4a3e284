#include "fermi/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fermi/errors.hpp"
#include "fermi/random.hpp"

namespace fermi {

namespace {

constexpr double kStateTol = 1e-12;

HermitianMatrix validated_density(const ComplexMatrix& rho) {
  if (rho.rows() < 1 || rho.rows() != rho.cols()) fail(Errc::InvalidState, "density matrix must be square");
  if (!rho.allFinite()) fail(Errc::InvalidState, "density matrix has non-finite entries");
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kStateTol) fail(Errc::InvalidState, "density matrix is not Hermitian");
  HermitianMatrix h(rho, 1.0);
  const Complex tr = h.matrix().trace();
  if (std::abs(tr - 1.0) > kStateTol) {
    std::ostringstream os;
    os << "Tr(rho) = " << tr.real() << " differs from 1";
    fail(Errc::InvalidState, os.str());
  }
  const double min_eig = eigenvalues_hermitian(h)(0);
  if (min_eig < -kStateTol) {
    std::ostringstream os;
    os << "rho has negative eigenvalue " << min_eig;
    fail(Errc::InvalidState, os.str());
  }
  return h;
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension " << a << " vs " << b;
    fail(Errc::DimensionMismatch, os.str());
  }
}

// Tr(X Y) without forming the product.
Complex trace_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.transpose().cwiseProduct(y)).sum();
}

}  // namespace

DensityState::DensityState(const ComplexMatrix& rho) : rho_(validated_density(rho)) {}

DensityState DensityState::pure(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) fail(Errc::InvalidState, "pure state from a zero vector");
  const ComplexVector u = v / norm;
  return DensityState(u * u.adjoint());
}

DensityState DensityState::mixture(std::span<const ComplexVector> vectors, std::span<const double> weights) {
  if (vectors.empty() || vectors.size() != weights.size())
    fail(Errc::InvalidState, "mixture needs matching non-empty vectors and weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) fail(Errc::InvalidState, "negative mixture weight");
    total += w;
  }
  if (!(total > 0.0)) fail(Errc::InvalidState, "mixture weights sum to zero");
  const Index n = vectors.front().size();
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require_same_dim(vectors[i].size(), n, "mixture");
    const ComplexVector u = vectors[i] / vectors[i].norm();
    rho.noalias() += (weights[i] / total) * (u * u.adjoint());
  }
  return DensityState(rho);
}

DensityState DensityState::maximally_mixed(Index n) {
  return DensityState(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

Complex DensityState::operator()(const ComplexMatrix& a) const {
  require_same_dim(a.rows(), dim(), "state evaluation");
  require_same_dim(a.cols(), dim(), "state evaluation");
  return trace_product(rho_.matrix(), a);
}

double DensityState::purity() const { return rho_.matrix().squaredNorm(); }

std::vector<ComplexMatrix> default_probes(const ComplexMatrix& a, std::uint64_t seed, int random_count) {
  const Index n = a.rows();
  std::vector<ComplexMatrix> probes;
  probes.reserve(3 + static_cast<std::size_t>(std::max(random_count, 0)));
  probes.push_back(ComplexMatrix::Identity(n, n));
  probes.push_back(a);
  probes.push_back(a.adjoint());
  Rng rng(seed);
  for (int i = 0; i < random_count; ++i) probes.push_back(ginibre(n, rng));
  return probes;
}

EigenstateReport check_eigenstate(const DensityState& omega, const ComplexMatrix& a, double tol,
                                  std::span<const ComplexMatrix> probes) {
  if (probes.empty()) fail(Errc::InvalidArgument, "check_eigenstate needs at least one probe");
  const Index n = omega.dim();
  require_same_dim(a.rows(), n, "check_eigenstate");

  EigenstateReport report{};
  report.lambda = omega(a);
  const ComplexMatrix shifted = a - report.lambda * ComplexMatrix::Identity(n, n);
  report.quadratic_defect = omega(shifted.adjoint() * shifted).real();
  report.max_linear_defect = 0.0;
  for (const auto& b : probes) {
    require_same_dim(b.rows(), n, "probe");
    const double d = std::abs(omega(b * a) - report.lambda * omega(b));
    report.max_linear_defect = std::max(report.max_linear_defect, d);
  }
  report.pass = report.quadratic_defect <= tol;
  return report;
}

NormalAdjointReport check_normal_adjoint(const DensityState& omega, const ComplexMatrix& a, double tol) {
  if (!is_normal(a)) fail(Errc::NotNormal, "check_normal_adjoint requires a normal element");
  const ComplexMatrix a_star = a.adjoint();
  const auto probes = default_probes(a);
  NormalAdjointReport out{};
  out.forward = check_eigenstate(omega, a, tol, probes);
  out.adjoint = check_eigenstate(omega, a_star, tol, probes);
  const bool conj_match = std::abs(out.adjoint.lambda - std::conj(out.forward.lambda)) <= std::sqrt(tol);
  out.pass = !out.forward.pass || (out.adjoint.pass && conj_match);
  return out;
}

FunctionalCalculusReport check_functional_calculus(const DensityState& omega, const ComplexMatrix& a,
                                                   const std::function<Complex(Complex)>& f, double tol,
                                                   std::span<const ComplexMatrix> probes) {
  const NormalDecomposition dec = normal_decomposition(a);
  const EigenstateReport base = check_eigenstate(omega, a, tol, probes);
  if (!base.pass) {
    std::ostringstream os;
    os << "state is not an eigenstate of A (quadratic defect " << base.quadratic_defect << ")";
    fail(Errc::NotEigenstate, os.str());
  }
  const ComplexMatrix fa = apply_function(dec, f);

  FunctionalCalculusReport out{};
  out.expected = f(base.lambda);
  out.transformed = check_eigenstate(omega, fa, tol, probes);
  out.max_commutator = 0.0;
  bool commutators_ok = true;
  const double root_tol = std::sqrt(tol);
  for (const auto& b : probes) {
    const double c = std::abs(omega(b * fa - fa * b));
    out.max_commutator = std::max(out.max_commutator, c);
    if (c > 2.0 * root_tol * std::max(1.0, b.norm())) commutators_ok = false;
  }
  const double scale = std::max(1.0, std::abs(out.expected));
  out.pass = out.transformed.pass && std::abs(out.transformed.lambda - out.expected) <= root_tol * scale &&
             commutators_ok;
  return out;
}

GnsRepresentation::GnsRepresentation(const DensityState& omega, double discard_norm) : omega_(omega) {
  const Index n = omega.dim();
  // <x, y> = Tr((x r)^* (y r)) with r = rho^{1/2}. Evaluating Tr(rho x^* y)
  // directly leaves a sqrt(eps) floor on the norms of null vectors.
  const EigenDecomposition dec = eig_hermitian(omega.rho());
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * dec.values.cwiseAbs().maxCoeff();
  const ComplexMatrix r = apply_function(dec, [floor](double p) { return Complex(p > floor ? std::sqrt(p) : 0.0); });
  auto inner = [&](const ComplexMatrix& x, const ComplexMatrix& y) { return ((x * r).adjoint() * (y * r)).trace(); };

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix v = ComplexMatrix::Zero(n, n);
      v(i, j) = 1.0;
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis_) v -= inner(b, v) * b;
      const double norm = std::sqrt(std::max(0.0, inner(v, v).real()));
      if (norm < discard_norm) continue;
      basis_.push_back(v / norm);
    }
  }
  cyclic_.resize(gns_dim());
  for (Index k = 0; k < gns_dim(); ++k) cyclic_(k) = inner(basis_[static_cast<std::size_t>(k)], ComplexMatrix::Identity(n, n));
}

ComplexMatrix GnsRepresentation::represent(const ComplexMatrix& a) const {
  require_same_dim(a.rows(), omega_.dim(), "GNS representation");
  const ComplexMatrix& rho = omega_.rho().matrix();
  const Index d = gns_dim();
  std::vector<ComplexMatrix> images;
  images.reserve(basis_.size());
  for (const auto& b : basis_) images.push_back(a * b);
  ComplexMatrix pi(d, d);
  for (Index k = 0; k < d; ++k) {
    const ComplexMatrix left = rho * basis_[static_cast<std::size_t>(k)].adjoint();
    for (Index l = 0; l < d; ++l) pi(k, l) = trace_product(left, images[static_cast<std::size_t>(l)]);
  }
  return pi;
}

Complex GnsRepresentation::vector_expectation(const ComplexMatrix& a) const {
  return cyclic_.dot(represent(a) * cyclic_);
}

DensityState compress_state(const DensityState& omega, const HermitianMatrix& p) {
  require_same_dim(p.dim(), omega.dim(), "compress_state");
  const ComplexMatrix& pm = p.matrix();
  if ((pm * pm - pm).norm() > 1e-10) fail(Errc::NotProjection, "||P^2 - P|| exceeds 1e-10");
  const double weight = omega(pm).real();
  if (weight <= 1e-12) fail(Errc::NullWeight, "omega(P) vanishes");
  const ComplexMatrix compressed = pm * omega.rho().matrix() * pm / weight;
  return DensityState((compressed + compressed.adjoint()) * 0.5);
}

ProjectionEquivalence projection_equivalences(const DensityState& omega, const HermitianMatrix& p, double tol) {
  ProjectionEquivalence out{};
  out.weight = omega(p.matrix()).real();
  try {
    const DensityState compressed = compress_state(omega, p);
    out.compressed_equals = (compressed.rho().matrix() - omega.rho().matrix()).norm() <= tol;
  } catch (const Error& e) {
    if (e.code() != Errc::NullWeight) throw;
    out.compressed_equals = false;
  }
  const std::vector<ComplexMatrix> probes{ComplexMatrix::Identity(p.dim(), p.dim())};
  const EigenstateReport r = check_eigenstate(omega, p.matrix(), tol, probes);
  out.eigenstate_of_p = r.pass && std::abs(r.lambda - 1.0) <= std::sqrt(tol);
  out.full_weight = std::abs(out.weight - 1.0) <= tol;
  return out;
}

double independence_gram(std::span<const DensityState> states) {
  if (states.size() < 2) fail(Errc::InvalidArgument, "independence_gram needs at least two states");
  const auto m = static_cast<Index>(states.size());
  ComplexMatrix g(m, m);
  for (Index i = 0; i < m; ++i) {
    require_same_dim(states[static_cast<std::size_t>(i)].dim(), states.front().dim(), "independence_gram");
    for (Index j = 0; j < m; ++j)
      g(i, j) = trace_product(states[static_cast<std::size_t>(i)].rho().matrix(),
                              states[static_cast<std::size_t>(j)].rho().matrix());
  }
  return singular_values(g).minCoeff();
}

double state_distance(const DensityState& omega1, const DensityState& omega2) {
  require_same_dim(omega1.dim(), omega2.dim(), "state_distance");
  return trace_norm(omega1.rho().matrix() - omega2.rho().matrix());
}

}  // namespace fermi
