#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace fermi {

/// Worker count: FERMI_SPECTRA_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, n) over contiguous chunks. Results must be
/// written to index-addressed slots; the exception from the lowest failing
/// chunk is rethrown so failures are reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fermi
