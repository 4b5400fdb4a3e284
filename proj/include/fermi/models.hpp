#pragma once

// Reference models with closed-form structure: the staggered graphene
// symbol, a band-crossing symbol, a curved two-band symbol and the
// truncated unilateral shift.

#include <array>
#include <memory>
#include <string>

#include "fermi/disintegration.hpp"
#include "fermi/symbol.hpp"

namespace fermi {

/// H(k) = [[gamma, e^{-ik1} + e^{-ik2}], [e^{ik1} + e^{ik2}, -gamma]].
/// Throws NonPositiveGamma unless gamma > 0.
std::shared_ptr<const TrigPolynomialSymbol> graphene_symbol(double gamma);

/// eps_+(k) = sqrt(gamma^2 + 4 cos^2((k1 - k2) / 2)).
double graphene_upper_band(double gamma, const KPoint& k);

/// P_s(k) = 1/2 + s H(k) / (2 eps_+(k)) for s = +1 or -1.
ComplexMatrix graphene_projection(double gamma, const KPoint& k, int sign);

/// The profile y -> sqrt(gamma^2 + 4 cos^2(y / 2)) on [-2 pi, 2 pi], with
/// its derivative, sampled on `grid` nodes.
GridFunction1D graphene_profile(double gamma, std::size_t grid);

struct LineSegment {
  std::string name;
  KPoint origin{};
  KPoint direction{};
  double weight = 0.0;  // mass the Fermi measure assigns to the segment

  KPoint at(double tau) const { return {origin[0] + tau * direction[0], origin[1] + tau * direction[1]}; }
  double length() const;
};

/// How the four lines share the Fermi measure. `haar` is the disintegration
/// of normalized Haar measure along eps_+: each line weighted by its length.
/// `equal` puts 1/4 on every line.
enum class LineWeights { haar, equal };

struct GrapheneFermiLines {
  double theta = 0.0;
  int band_sign = 1;  // +1 for the upper band, -1 for the lower one
  std::array<LineSegment, 4> lines;  // L+, L-, G+, G-
};

/// Fermi surface at |lambda| in (gamma, sqrt(gamma^2 + 4)); negative lambda
/// selects the lower band. Throws LambdaOutOfBand outside the closed band
/// and ExtremeLevel at its edges.
GrapheneFermiLines graphene_fermi_analytic(double gamma, double lambda, LineWeights weights = LineWeights::haar);

/// sum over lines of weight * int_0^1 dtau Tr(P(s(tau)) A(s(tau))),
/// adaptive Gauss-Kronrod with absolute tolerance 1e-10.
Complex graphene_state_analytic(double gamma, double lambda, const MatrixField& a,
                                LineWeights weights = LineWeights::haar);

/// diag(sin k1, 2 sin k1): both bands vanish on k1 = 0 and k1 = pi.
std::shared_ptr<const TrigPolynomialSymbol> crossing_symbol();

/// [[c, t], [t, -c]] with c = cos k1 + cos k2; bands +-sqrt(c^2 + t^2).
std::shared_ptr<const TrigPolynomialSymbol> square_two_band(double t);

/// N x N matrix with ones on the first subdiagonal.
ComplexMatrix truncated_shift(Index n);

}  // namespace fermi
