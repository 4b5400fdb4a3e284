#pragma once

// JSON form of trigonometric-polynomial symbols:
//
//   {"fiber_dim": 2, "torus_dim": 2,
//    "entries": [{"row": 0, "col": 1, "terms": [[m1, m2, re, im], ...]}, ...]}
//
// torus_dim defaults to 2; 1-D symbols may give terms as [m1, re, im].

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "fermi/symbol.hpp"

namespace fermi {

/// Throws InvalidSymbol on malformed input or non-Hermitian coefficients.
std::shared_ptr<const TrigPolynomialSymbol> parse_symbol(const nlohmann::ordered_json& doc);
std::shared_ptr<const TrigPolynomialSymbol> load_symbol(const std::filesystem::path& path);

nlohmann::ordered_json symbol_to_json(const TrigPolynomialSymbol& symbol);

}  // namespace fermi
