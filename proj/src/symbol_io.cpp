#include "fermi/symbol_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

template <typename T>
T field(const nlohmann::ordered_json& obj, const char* key) {
  if (!obj.contains(key)) fail(Errc::InvalidSymbol, std::string("symbol file lacks \"") + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(Errc::InvalidSymbol, std::string("symbol field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::shared_ptr<const TrigPolynomialSymbol> parse_symbol(const nlohmann::ordered_json& doc) {
  if (!doc.is_object()) fail(Errc::InvalidSymbol, "symbol document must be a JSON object");
  const auto n = field<Index>(doc, "fiber_dim");
  const int d = doc.contains("torus_dim") ? field<int>(doc, "torus_dim") : 2;
  const auto entries = field<nlohmann::ordered_json>(doc, "entries");
  if (!entries.is_array()) fail(Errc::InvalidSymbol, "\"entries\" must be an array");

  std::vector<FourierTerm> terms;
  for (const auto& entry : entries) {
    if (!entry.is_object()) fail(Errc::InvalidSymbol, "each entry must be an object");
    const auto row = field<Index>(entry, "row");
    const auto col = field<Index>(entry, "col");
    const auto list = field<nlohmann::ordered_json>(entry, "terms");
    if (!list.is_array()) fail(Errc::InvalidSymbol, "\"terms\" must be an array");
    for (const auto& t : list) {
      if (!t.is_array() || !(t.size() == 4 || (d == 1 && t.size() == 3)))
        fail(Errc::InvalidSymbol, "a term is [m1, m2, re, im] (or [m1, re, im] on a 1-D torus)");
      try {
        FourierTerm term;
        term.row = row;
        term.col = col;
        const bool short_form = t.size() == 3;
        term.m1 = t.at(0).get<int>();
        term.m2 = short_form ? 0 : t.at(1).get<int>();
        term.coeff = Complex(t.at(short_form ? 1 : 2).get<double>(), t.at(short_form ? 2 : 3).get<double>());
        terms.push_back(term);
      } catch (const nlohmann::json::exception&) {
        fail(Errc::InvalidSymbol, "term entries must be numbers");
      }
    }
  }
  return std::make_shared<const TrigPolynomialSymbol>(n, d, std::move(terms));
}

std::shared_ptr<const TrigPolynomialSymbol> load_symbol(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidSymbol, "cannot open symbol file " + path.string());
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidSymbol, "symbol file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_symbol(doc);
}

nlohmann::ordered_json symbol_to_json(const TrigPolynomialSymbol& symbol) {
  std::map<std::pair<Index, Index>, nlohmann::ordered_json> grouped;
  for (const auto& t : symbol.terms())
    grouped[{t.row, t.col}].push_back({t.m1, t.m2, t.coeff.real(), t.coeff.imag()});
  nlohmann::ordered_json doc;
  doc["fiber_dim"] = symbol.fiber_dim();
  doc["torus_dim"] = symbol.torus_dim();
  doc["entries"] = nlohmann::ordered_json::array();
  for (auto& [key, list] : grouped) {
    nlohmann::ordered_json entry;
    entry["row"] = key.first;
    entry["col"] = key.second;
    entry["terms"] = std::move(list);
    doc["entries"].push_back(std::move(entry));
  }
  return doc;
}

}  // namespace fermi
