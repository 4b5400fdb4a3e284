#pragma once

// fermi-spectra command-line front end, callable in-process.

#include <ostream>
#include <string>
#include <vector>

#include "fermi/errors.hpp"

namespace fermi::cli {

inline constexpr const char* kSchema = "fermi-spectra/1";

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kEmptySurface = 4,
  kSingularLevel = 5,
  kDefectTooLarge = 6,
};

int exit_code_for(Errc code) noexcept;

/// `args` excludes the program name. Data goes to `out` (or --out),
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fermi::cli
