#include "fermi/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fermi/errors.hpp"
#include "fermi/parallel.hpp"

namespace fermi {

KPoint GridSpec::point(std::size_t i, std::size_t j) const noexcept {
  const double two_pi = 2.0 * std::numbers::pi;
  return {two_pi * static_cast<double>(i) / static_cast<double>(n1),
          n2 > 1 ? two_pi * static_cast<double>(j) / static_cast<double>(n2) : 0.0};
}

GridSpec grid_for(const HermitianSymbol& symbol, std::size_t n) {
  return symbol.torus_dim() == 2 ? GridSpec{n, n} : GridSpec{n, 1};
}

BandStructure sample_bands(SymbolPtr symbol, GridSpec grid, bool keep_frames) {
  if (!symbol) fail(Errc::InvalidArgument, "sample_bands needs a symbol");
  const int d = symbol->torus_dim();
  if (grid.n1 < kMinGrid || (d == 2 && grid.n2 < kMinGrid) || (d == 1 && grid.n2 != 1)) {
    std::ostringstream os;
    os << "grid " << grid.n1 << "x" << grid.n2 << " is invalid for a " << d << "-D symbol (minimum " << kMinGrid
       << " per axis)";
    fail(Errc::InvalidArgument, os.str());
  }

  BandStructure bs;
  bs.symbol_ = symbol;
  bs.grid_ = grid;
  bs.bands_ = symbol->fiber_dim();
  bs.dim_ = d;
  const auto nb = static_cast<std::size_t>(bs.bands_);
  bs.energies_.resize(grid.nodes() * nb);
  if (keep_frames) bs.frames_.resize(grid.nodes());

  parallel_for(grid.n2, [&](std::size_t j) {
    for (std::size_t i = 0; i < grid.n1; ++i) {
      const std::size_t node = grid.index(i, j);
      const EigenDecomposition dec = eig_hermitian(HermitianMatrix(symbol->evaluate(grid.point(i, j))));
      for (std::size_t b = 0; b < nb; ++b) bs.energies_[node * nb + b] = dec.values(static_cast<Index>(b));
      if (keep_frames) bs.frames_[node] = dec.vectors;
    }
  });

  bs.ranges_.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double lo = bs.energies_[b];
    double hi = lo;
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
      lo = std::min(lo, bs.energies_[node * nb + b]);
      hi = std::max(hi, bs.energies_[node * nb + b]);
    }
    bs.ranges_[b] = {lo, hi};
  }
  return bs;
}

std::vector<Interval> spectrum_union(const BandStructure& bs, double resolution) {
  std::vector<Interval> ranges = bs.band_ranges();
  std::sort(ranges.begin(), ranges.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double scale = 0.0;
  for (const auto& r : ranges) scale = std::max({scale, std::abs(r.lo), std::abs(r.hi)});
  const double close = std::max(resolution, 64.0 * std::numeric_limits<double>::epsilon() * scale);
  std::vector<Interval> merged;
  for (const auto& r : ranges) {
    if (!merged.empty() && r.lo - merged.back().hi <= close) {
      merged.back().hi = std::max(merged.back().hi, r.hi);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

}  // namespace fermi
