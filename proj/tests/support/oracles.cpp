#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

std::vector<Complex> charpoly(const ComplexMatrix& a) {
  const auto n = a.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& monic) {
  const auto n = static_cast<Eigen::Index>(monic.size()) - 1;
  ComplexMatrix comp = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -monic[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(comp, false);
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
  return roots;
}

std::vector<double> eigenvalues_by_charpoly(const ComplexMatrix& h) {
  std::vector<double> out;
  for (Complex r : polynomial_roots(charpoly(h))) out.push_back(r.real());
  return out;
}

std::array<double, 2> eig2(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {0.5 * (a + d) - r, 0.5 * (a + d) + r};
}

Eigen::VectorXd jacobi_singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

int numeric_rank(const ComplexMatrix& m, double rel_tol) {
  const Eigen::VectorXd s = jacobi_singular_values(m);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

std::vector<double> histogram_pushforward(const std::function<double(double)>& f, double a, double b,
                                          const std::vector<double>& edges, std::size_t samples,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(a, b);
  std::vector<double> counts(edges.size() - 1, 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const double y = f(u(rng));
    const auto it = std::upper_bound(edges.begin(), edges.end(), y);
    if (it == edges.begin() || it == edges.end()) continue;
    counts[static_cast<std::size_t>(it - edges.begin() - 1)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(samples);
  return counts;
}

ShellTally monte_carlo_shell(const std::function<double(const fermi::KPoint&)>& eps, double lambda, double eta,
                             const std::function<int(const fermi::KPoint&)>& classify, int classes,
                             std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  ShellTally t;
  t.mass.assign(static_cast<std::size_t>(classes), 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const fermi::KPoint k{u(rng), u(rng)};
    if (std::abs(eps(k) - lambda) >= eta) continue;
    t.mass[static_cast<std::size_t>(classify(k))] += 1.0;
    ++t.accepted;
  }
  for (double& m : t.mass) m /= static_cast<double>(std::max<std::size_t>(t.accepted, 1));
  return t;
}

Complex torus_average(const std::function<Complex(const fermi::KPoint&)>& f, std::size_t n) {
  Complex acc{};
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) acc += f({h * static_cast<double>(i), h * static_cast<double>(j)});
  return acc / static_cast<double>(n * n);
}

}  // namespace oracle
