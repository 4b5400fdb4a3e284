#pragma once

// Band structure of a symbol on a uniform periodic grid and the spectral
// union of its energy functions.

#include <cstddef>
#include <vector>

#include "fermi/disintegration.hpp"
#include "fermi/symbol.hpp"

namespace fermi {

/// Uniform torus grid with nodes k = 2 pi (i / n1, j / n2). For 1-D symbols
/// n2 is 1.
struct GridSpec {
  std::size_t n1 = 0;
  std::size_t n2 = 1;

  std::size_t nodes() const noexcept { return n1 * n2; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * n1 + i; }
  KPoint point(std::size_t i, std::size_t j) const noexcept;
};

/// Minimum grid size per axis.
inline constexpr std::size_t kMinGrid = 16;

/// Square grid for 2-D symbols, n x 1 for 1-D symbols.
GridSpec grid_for(const HermitianSymbol& symbol, std::size_t n);

class BandStructure {
 public:
  const GridSpec& grid() const noexcept { return grid_; }
  Index band_count() const noexcept { return bands_; }
  int torus_dim() const noexcept { return dim_; }
  const HermitianSymbol& symbol() const noexcept { return *symbol_; }
  SymbolPtr symbol_ptr() const noexcept { return symbol_; }

  double energy(std::size_t i, std::size_t j, Index band) const {
    return energies_[grid_.index(i, j) * static_cast<std::size_t>(bands_) + static_cast<std::size_t>(band)];
  }
  /// Eigenvectors at node (i, j); empty unless frames were kept.
  const ComplexMatrix& frame(std::size_t i, std::size_t j) const { return frames_.at(grid_.index(i, j)); }
  bool has_frames() const noexcept { return !frames_.empty(); }

  /// [min, max] of band b over the grid.
  Interval band_range(Index band) const { return ranges_.at(static_cast<std::size_t>(band)); }
  const std::vector<Interval>& band_ranges() const noexcept { return ranges_; }

 private:
  friend BandStructure sample_bands(SymbolPtr symbol, GridSpec grid, bool keep_frames);

  SymbolPtr symbol_;
  GridSpec grid_;
  Index bands_ = 0;
  int dim_ = 0;
  std::vector<double> energies_;
  std::vector<ComplexMatrix> frames_;
  std::vector<Interval> ranges_;
};

/// Diagonalizes H at every grid node (data-parallel, deterministic). Throws
/// InvalidArgument for grids below kMinGrid per axis.
BandStructure sample_bands(SymbolPtr symbol, GridSpec grid, bool keep_frames = true);

/// Per-band ranges merged into maximal disjoint closed intervals; gaps no
/// wider than `resolution` (and never narrower than rounding of the
/// eigenvalues) are closed.
std::vector<Interval> spectrum_union(const BandStructure& bs, double resolution = 0.0);

}  // namespace fermi
