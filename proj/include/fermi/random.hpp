#pragma once

#include <cstdint>
#include <random>

#include "fermi/hermitian.hpp"

namespace fermi {

using Rng = std::mt19937_64;

/// Entries i.i.d. (N(0,1) + i N(0,1)) / sqrt(2).
ComplexMatrix ginibre(Index n, Rng& rng);

/// (G + G*) / 2 for a Ginibre G.
HermitianMatrix random_hermitian(Index n, Rng& rng);

ComplexVector random_unit_vector(Index n, Rng& rng);

/// Haar-random unitary from the QR factorization of a Ginibre matrix.
ComplexMatrix random_unitary(Index n, Rng& rng);

}  // namespace fermi
