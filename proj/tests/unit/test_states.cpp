#include <doctest.h>

#include <cmath>
#include <vector>

#include "fermi/errors.hpp"
#include "fermi/random.hpp"
#include "fermi/states.hpp"

using namespace fermi;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

ComplexVector basis(Index n, Index i) {
  ComplexVector v = ComplexVector::Zero(n);
  v(i) = 1.0;
  return v;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a throw");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("DensityState construction") {
  CHECK(code_of([] { DensityState s(diag({0.5, 0.6})); }) == Errc::InvalidState);
  CHECK(code_of([] { DensityState s(diag({1.2, -0.2})); }) == Errc::InvalidState);
  const auto mm = DensityState::maximally_mixed(3);
  CHECK(mm(ComplexMatrix::Identity(3, 3)).real() == doctest::Approx(1.0));
  CHECK(mm.purity() == doctest::Approx(1.0 / 3.0));
  CHECK(DensityState::pure(basis(3, 1)).is_pure());
}

TEST_CASE("check_eigenstate examples") {
  Rng rng(21);
  const auto h = random_hermitian(4, rng);
  const auto dec = eig_hermitian(h);

  SUBCASE("eigenvector state passes") {
    ComplexMatrix h2 = diag({2.0, -1.0, 0.5});
    const auto omega = DensityState::pure(basis(3, 0));
    const auto probes = default_probes(h2);
    const auto r = check_eigenstate(omega, h2, 1e-12, probes);
    CHECK(r.pass);
    CHECK(r.lambda.real() == doctest::Approx(2.0));
    CHECK(r.quadratic_defect <= 1e-14);
  }
  SUBCASE("mixture across two eigenvalues fails with the closed-form defect") {
    const double l1 = dec.values(0);
    const double l2 = dec.values(3);
    std::vector<ComplexVector> vs{dec.vectors.col(0), dec.vectors.col(3)};
    std::vector<double> ws{0.5, 0.5};
    const auto omega = DensityState::mixture(vs, ws);
    const auto probes = default_probes(h.matrix());
    const auto r = check_eigenstate(omega, h.matrix(), 1e-10, probes);
    const double mean = 0.5 * (l1 + l2);
    const double expected = 0.5 * (l1 - mean) * (l1 - mean) + 0.5 * (l2 - mean) * (l2 - mean);
    CHECK_FALSE(r.pass);
    CHECK(r.quadratic_defect == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("scalar element") {
    const ComplexMatrix c = Complex(1.5, -0.5) * ComplexMatrix::Identity(4, 4);
    const auto omega = DensityState::pure(random_unit_vector(4, rng));
    const auto probes = default_probes(c);
    const auto r = check_eigenstate(omega, c, 1e-12, probes);
    CHECK(r.pass);
    CHECK(std::abs(r.lambda - Complex(1.5, -0.5)) < 1e-15);
  }
}

TEST_CASE("quadratic and linear criteria agree on random Mat_4 pairs") {
  Rng rng(22);
  std::uniform_int_distribution<int> kind(0, 2);
  int agree = 0;
  const int total = 200;
  for (int trial = 0; trial < total; ++trial) {
    const auto h = random_hermitian(4, rng);
    const auto dec = eig_hermitian(h);
    DensityState omega = DensityState::maximally_mixed(4);
    switch (kind(rng)) {
      case 0: omega = DensityState::pure(dec.vectors.col(trial % 4)); break;
      case 1: omega = DensityState::pure(random_unit_vector(4, rng)); break;
      default: {
        std::vector<ComplexVector> vs{dec.vectors.col(0), dec.vectors.col(2)};
        std::vector<double> ws{0.3, 0.7};
        omega = DensityState::mixture(vs, ws);
      }
    }
    const auto probes = default_probes(h.matrix(), 1000 + static_cast<std::uint64_t>(trial), 50);
    const double tol = 1e-10;
    const auto r = check_eigenstate(omega, h.matrix(), tol, probes);
    double scale = 0.0;
    for (const auto& b : probes) scale = std::max(scale, b.norm());
    const bool linear_pass = r.max_linear_defect <= std::sqrt(tol) * scale;
    if (linear_pass == r.pass) ++agree;
    if (r.pass) CHECK(r.lambda == omega(h.matrix()));
  }
  CHECK(agree == total);
}

TEST_CASE("normal adjoint") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = Complex(0, 1);
  a(1, 1) = Complex(0, -1);
  const auto r = check_normal_adjoint(DensityState::pure(basis(2, 0)), a, 1e-12);
  CHECK(r.pass);
  CHECK(std::abs(r.forward.lambda - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(r.adjoint.lambda - Complex(0, -1)) < 1e-15);

  Rng rng(23);
  const ComplexMatrix u = random_unitary(4, rng);
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << Complex(1, 1), Complex(-2, 0.5), Complex(0, 3), Complex(0.5, -1);
  const ComplexMatrix n = u * d * u.adjoint();
  const auto rn = check_normal_adjoint(DensityState::pure(u.col(2)), n, 1e-10);
  CHECK(rn.pass);
  CHECK(rn.forward.pass);
  CHECK(std::abs(rn.forward.lambda - Complex(0, 3)) < 1e-10);

  ComplexMatrix shift = ComplexMatrix::Zero(2, 2);
  shift(1, 0) = 1.0;
  CHECK(code_of([&] { check_normal_adjoint(DensityState::maximally_mixed(2), shift, 1e-12); }) == Errc::NotNormal);
}

TEST_CASE("functional calculus") {
  SUBCASE("squaring") {
    const ComplexMatrix a = diag({1.0, 2.0});
    const auto omega = DensityState::pure(basis(2, 1));
    const auto probes = default_probes(a);
    const auto r = check_functional_calculus(omega, a, [](Complex z) { return z * z; }, 1e-12, probes);
    CHECK(r.pass);
    CHECK(std::abs(r.expected - 4.0) < 1e-14);
    CHECK(std::abs(r.transformed.lambda - 4.0) < 1e-14);
  }
  SUBCASE("random cubic transports the eigenvalue") {
    Rng rng(24);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = random_hermitian(4, rng);
      const auto dec = eig_hermitian(h);
      const double c0 = c(rng), c1 = c(rng), c2 = c(rng), c3 = c(rng);
      auto p = [&](Complex z) { return ((c3 * z + c2) * z + c1) * z + c0; };
      const auto omega = DensityState::pure(dec.vectors.col(1));
      const auto probes = default_probes(h.matrix());
      const auto r = check_functional_calculus(omega, h.matrix(), p, 1e-10, probes);
      CHECK(r.pass);
      CHECK(std::abs(r.transformed.lambda - p(dec.values(1))) <= 1e-10);
      CHECK(r.max_commutator <= 1e-9);
    }
  }
  SUBCASE("preconditions") {
    const ComplexMatrix a = diag({1.0, 2.0});
    const auto probes = default_probes(a);
    CHECK(code_of([&] {
            check_functional_calculus(DensityState::maximally_mixed(2), a, [](Complex z) { return z; }, 1e-12, probes);
          }) == Errc::NotEigenstate);
  }
}

TEST_CASE("GNS construction") {
  Rng rng(25);
  SUBCASE("dimension counts") {
    CHECK(gns(DensityState::pure(random_unit_vector(2, rng))).gns_dim() == 2);
    CHECK(gns(DensityState::maximally_mixed(2)).gns_dim() == 4);
    std::vector<ComplexVector> vs{basis(3, 0), basis(3, 2)};
    std::vector<double> ws{0.4, 0.6};
    CHECK(gns(DensityState::mixture(vs, ws)).gns_dim() == 6);
  }
  SUBCASE("expectations, homomorphism and cyclic eigenvector") {
    const auto h = random_hermitian(3, rng);
    const auto dec = eig_hermitian(h);
    std::vector<ComplexVector> vs{dec.vectors.col(0), random_unit_vector(3, rng)};
    std::vector<double> ws{0.5, 0.5};
    const auto omega = DensityState::mixture(vs, ws);
    const GnsRepresentation rep(omega);
    CHECK(rep.cyclic_vector().norm() == doctest::Approx(1.0));
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix a = ginibre(3, rng);
      const ComplexMatrix b = ginibre(3, rng);
      CHECK(std::abs(rep.vector_expectation(a) - omega(a)) <= 1e-10);
      if (trial < 20) {
        CHECK((rep.represent(a * b) - rep.represent(a) * rep.represent(b)).norm() <= 1e-9);
        CHECK((rep.represent(a.adjoint()) - rep.represent(a).adjoint()).norm() <= 1e-10);
      }
    }
    const auto eig = DensityState::pure(dec.vectors.col(0));
    const GnsRepresentation er(eig);
    const ComplexVector psi = er.cyclic_vector();
    CHECK((er.represent(h.matrix()) * psi - dec.values(0) * psi).norm() <= 1e-10);
  }
}

TEST_CASE("compress_state") {
  const ComplexMatrix p0 = diag({1.0, 0.0});
  SUBCASE("maximally mixed compressed to the first basis vector") {
    const auto omega = DensityState::maximally_mixed(2);
    const auto c = compress_state(omega, HermitianMatrix(p0));
    CHECK((c.rho().matrix() - p0).norm() < 1e-15);
    const auto eq = projection_equivalences(omega, HermitianMatrix(p0));
    CHECK(eq.weight == doctest::Approx(0.5));
    CHECK_FALSE(eq.compressed_equals);
    CHECK_FALSE(eq.eigenstate_of_p);
    CHECK_FALSE(eq.full_weight);
  }
  SUBCASE("state supported in the range") {
    Rng rng(26);
    const ComplexMatrix u = random_unitary(4, rng);
    ComplexMatrix p = u.leftCols(2) * u.leftCols(2).adjoint();
    std::vector<ComplexVector> vs{u.col(0), u.col(1)};
    std::vector<double> ws{0.2, 0.8};
    const auto omega = DensityState::mixture(vs, ws);
    const auto eq = projection_equivalences(omega, HermitianMatrix(p, 1e-10));
    CHECK(eq.weight == doctest::Approx(1.0));
    CHECK(eq.compressed_equals);
    CHECK(eq.eigenstate_of_p);
    CHECK(eq.full_weight);
  }
  SUBCASE("identity projection and errors") {
    const auto omega = DensityState::pure(ComplexVector::Ones(2));
    const auto c = compress_state(omega, HermitianMatrix(ComplexMatrix::Identity(2, 2)));
    CHECK((c.rho().matrix() - omega.rho().matrix()).norm() < 1e-14);
    CHECK(code_of([&] { compress_state(omega, HermitianMatrix(diag({0.5, 0.0}))); }) == Errc::NotProjection);
    CHECK(code_of([&] { compress_state(DensityState::pure(basis(2, 1)), HermitianMatrix(p0)); }) == Errc::NullWeight);
  }
}

TEST_CASE("gapped cluster projection") {
  Rng rng(27);
  const ComplexMatrix u = random_unitary(5, rng);
  ComplexMatrix d = ComplexMatrix::Zero(5, 5);
  d.diagonal() << -3.0, 0.9, 1.0, 1.1, 4.0;
  const auto dec = eig_hermitian(HermitianMatrix(u * d * u.adjoint(), 1e-10));
  const ComplexMatrix p = spectral_projection(dec, 1.0, 0.2).matrix();
  std::vector<ComplexVector> vs{dec.vectors.col(1), dec.vectors.col(2), dec.vectors.col(3)};
  std::vector<double> ws{0.2, 0.5, 0.3};
  const auto omega = DensityState::mixture(vs, ws);
  const auto probes = default_probes(p);
  const auto r = check_eigenstate(omega, p, 1e-10, probes);
  CHECK(r.pass);
  CHECK(r.lambda.real() == doctest::Approx(1.0));
}

TEST_CASE("independence and orthogonality") {
  std::vector<DensityState> diag_states{DensityState::pure(basis(3, 0)), DensityState::pure(basis(3, 1)),
                                        DensityState::pure(basis(3, 2))};
  CHECK(independence_gram(diag_states) == doctest::Approx(1.0));
  std::vector<DensityState> twice{diag_states[0], diag_states[0]};
  CHECK(independence_gram(twice) < 1e-14);

  Rng rng(28);
  const auto dec = eig_hermitian(random_hermitian(5, rng));
  std::vector<DensityState> three{DensityState::pure(dec.vectors.col(0)), DensityState::pure(dec.vectors.col(2)),
                                  DensityState::pure(dec.vectors.col(4))};
  CHECK(independence_gram(three) > 0.5);
  CHECK(state_distance(three[0], three[1]) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(state_distance(three[2], three[2]) < 1e-14);
  CHECK(state_distance(DensityState(diag({1.0, 0.0})), DensityState(diag({0.5, 0.5}))) == doctest::Approx(1.0));
  CHECK(code_of([&] { state_distance(three[0], DensityState::maximally_mixed(2)); }) == Errc::DimensionMismatch);
}
