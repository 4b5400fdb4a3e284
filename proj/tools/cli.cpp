#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermi/bands.hpp"
#include "fermi/disintegration.hpp"
#include "fermi/fermi_surface.hpp"
#include "fermi/models.hpp"
#include "fermi/symbol_io.hpp"

namespace fermi::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Config {
  std::string command;
  std::string model = "graphene";
  double gamma = 1.0;
  double hopping = 0.5;
  double ell = 1.0;
  std::string grid = "128";
  std::optional<double> lambda;
  std::string sweep;
  double levelset_tol = 1e-10;
  double grad_floor = 1e-6;
  double gap_floor = 1e-6;
  double state_tol = 1e-6;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  std::string observable = "hamiltonian";
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::vector<double> parse_levels(const Config& c, bool required) {
  if (c.lambda && !c.sweep.empty()) throw ConfigError("--lambda and --lambda-sweep are exclusive");
  if (c.lambda) {
    if (!std::isfinite(*c.lambda)) throw ConfigError("--lambda must be finite");
    return {*c.lambda};
  }
  if (c.sweep.empty()) {
    if (required) throw ConfigError("this command needs --lambda or --lambda-sweep");
    return {};
  }
  double lo = 0.0;
  double hi = 0.0;
  long count = 0;
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream is(c.sweep);
  if (!(is >> lo >> sep1 >> hi >> sep2 >> count) || sep1 != ':' || sep2 != ':' || !is.eof())
    throw ConfigError("--lambda-sweep expects min:max:count");
  if (count < 1) throw ConfigError("--lambda-sweep count must be at least 1");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("--lambda-sweep bounds must be finite");
  std::vector<double> levels;
  for (long i = 0; i < count; ++i)
    levels.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return levels;
}

GridSpec parse_grid(const std::string& text, int torus_dim) {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  const auto x = text.find('x');
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      n1 = std::stoul(text, &used);
      if (used != text.size()) throw ConfigError("");
      n2 = torus_dim == 2 ? n1 : 1;
    } else {
      n1 = std::stoul(text.substr(0, x), &used);
      if (used != x) throw ConfigError("");
      const std::string rest = text.substr(x + 1);
      n2 = std::stoul(rest, &used);
      if (used != rest.size()) throw ConfigError("");
      if (torus_dim == 1) throw ConfigError("a 1-D symbol takes a single grid size");
    }
  } catch (const ConfigError& e) {
    throw ConfigError(*e.what() ? e.what() : "--grid expects N or N1xN2");
  } catch (const std::exception&) {
    throw ConfigError("--grid expects N or N1xN2");
  }
  if (n1 < kMinGrid || (torus_dim == 2 && n2 < kMinGrid))
    throw ConfigError("grid sizes must be at least " + std::to_string(kMinGrid));
  return {n1, n2};
}

void check_tolerances(const Config& c) {
  for (double t : {c.levelset_tol, c.grad_floor, c.gap_floor, c.state_tol})
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tolerances must be positive and finite");
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
}

SymbolPtr make_symbol(const Config& c) {
  if (c.model == "graphene") return graphene_symbol(c.gamma);
  if (c.model == "crossing") return crossing_symbol();
  if (c.model == "square") return square_two_band(c.hopping);
  if (std::filesystem::exists(c.model)) return load_symbol(c.model);
  throw ConfigError("unknown model '" + c.model + "' (graphene, crossing, square or a symbol file)");
}

MatrixField make_observable(const Config& c, const SymbolPtr& h) {
  const Index n = h->fiber_dim();
  if (c.observable == "identity") {
    return [n](const KPoint&) { return ComplexMatrix(ComplexMatrix::Identity(n, n)); };
  }
  if (c.observable == "hamiltonian") return [h](const KPoint& k) { return h->evaluate(k); };
  if (c.observable.rfind("diag:", 0) == 0) {
    std::vector<double> d;
    std::stringstream ss(c.observable.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        d.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("--observable diag: expects comma-separated numbers");
      }
    }
    if (static_cast<Index>(d.size()) != n) throw ConfigError("--observable diag: needs one entry per band");
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return [m](const KPoint&) { return m; };
  }
  if (std::filesystem::exists(c.observable)) {
    SymbolPtr a = load_symbol(c.observable);
    if (a->fiber_dim() != n) throw ConfigError("observable and model fiber dimensions differ");
    return [a](const KPoint& k) { return a->evaluate(k); };
  }
  throw ConfigError("unknown observable '" + c.observable + "' (identity, hamiltonian, diag:..., or a symbol file)");
}

FermiOptions fermi_options(const Config& c) {
  FermiOptions o;
  o.levelset_tol = c.levelset_tol;
  o.grad_floor = c.grad_floor;
  o.gap_floor = c.gap_floor;
  return o;
}

Json header(const Config& c, const std::vector<double>& levels) {
  Json doc;
  doc["schema"] = kSchema;
  doc["command"] = c.command;
  Json cfg;
  cfg["model"] = c.model;
  cfg["gamma"] = c.gamma;
  cfg["hopping"] = c.hopping;
  cfg["ell"] = c.ell;
  cfg["grid"] = c.grid;
  cfg["levels"] = levels;
  cfg["format"] = c.format;
  cfg["seed"] = c.seed;
  cfg["observable"] = c.observable;
  doc["config"] = std::move(cfg);
  Json tol;
  tol["levelset_tol"] = c.levelset_tol;
  tol["grad_floor"] = c.grad_floor;
  tol["gap_floor"] = c.gap_floor;
  tol["state_tol"] = c.state_tol;
  doc["tolerances"] = std::move(tol);
  return doc;
}

struct Output {
  std::string text;
  int code = kOk;
};

Output cmd_bands(const Config& c) {
  const SymbolPtr h = make_symbol(c);
  const GridSpec grid = parse_grid(c.grid, h->torus_dim());
  const BandStructure bs = sample_bands(h, grid, false);
  const auto spectrum = spectrum_union(bs);
  const Index nb = bs.band_count();

  std::ostringstream os;
  if (c.format == "csv") {
    os << "k1,k2";
    for (Index b = 0; b < nb; ++b) os << ",band_" << b;
    os << '\n';
    for (std::size_t j = 0; j < grid.n2; ++j)
      for (std::size_t i = 0; i < grid.n1; ++i) {
        const KPoint k = grid.point(i, j);
        os << fmt17(k[0]) << ',' << fmt17(k[1]);
        for (Index b = 0; b < nb; ++b) os << ',' << fmt17(bs.energy(i, j, b));
        os << '\n';
      }
    return {os.str(), kOk};
  }
  Json doc = header(c, {});
  Json result;
  result["grid"] = {grid.n1, grid.n2};
  result["band_count"] = nb;
  Json spec = Json::array();
  for (const auto& iv : spectrum) spec.push_back({iv.lo, iv.hi});
  result["spectrum"] = std::move(spec);
  Json ranges = Json::array();
  for (const auto& iv : bs.band_ranges()) ranges.push_back({iv.lo, iv.hi});
  result["band_ranges"] = std::move(ranges);
  Json nodes = Json::array();
  for (std::size_t j = 0; j < grid.n2; ++j)
    for (std::size_t i = 0; i < grid.n1; ++i) {
      const KPoint k = grid.point(i, j);
      Json row = {k[0], k[1]};
      for (Index b = 0; b < nb; ++b) row.push_back(bs.energy(i, j, b));
      nodes.push_back(std::move(row));
    }
  result["nodes"] = std::move(nodes);
  doc["result"] = std::move(result);
  return {doc.dump(2) + "\n", kOk};
}

Json level_json(const FermiSurfaceMesh& mesh, const FermiMeasure& m) {
  Json lv;
  lv["lambda"] = m.level;
  lv["gap"] = finite_or_null(m.gap);
  lv["total_mass"] = m.total_weight();
  lv["raw_mass"] = m.raw_mass;
  lv["dos"] = m.raw_mass / std::pow(2.0 * std::numbers::pi, m.torus_dim);
  lv["contributing_bands"] = mesh.contributing_bands;
  const auto masses = m.polyline_masses(mesh.polylines.size());
  Json lines = Json::array();
  for (std::size_t p = 0; p < mesh.polylines.size(); ++p) {
    const auto& pl = mesh.polylines[p];
    Json line;
    line["band"] = pl.band;
    line["closed"] = pl.closed;
    line["mass"] = masses[p];
    Json pts = Json::array();
    for (const auto& n : pl.nodes) pts.push_back({n.k[0], n.k[1]});
    line["points"] = std::move(pts);
    lines.push_back(std::move(line));
  }
  lv["polylines"] = std::move(lines);
  Json nodes = Json::array();
  for (const auto& n : m.nodes) {
    Json node;
    node["k"] = {n.k[0], n.k[1]};
    node["band"] = n.band;
    node["polyline"] = n.polyline;
    node["weight"] = n.weight;
    node["grad"] = n.grad;
    nodes.push_back(std::move(node));
  }
  lv["nodes"] = std::move(nodes);
  return lv;
}

Output cmd_fermi(const Config& c) {
  const std::vector<double> levels = parse_levels(c, true);
  const SymbolPtr h = make_symbol(c);
  const GridSpec grid = parse_grid(c.grid, h->torus_dim());
  const BandStructure bs = sample_bands(h, grid, false);
  const FermiOptions opt = fermi_options(c);
  const bool sweep = levels.size() > 1;

  std::ostringstream os;
  Json doc = header(c, levels);
  Json out_levels = Json::array();
  if (c.format == "csv") os << (sweep ? "lambda," : "") << "k1,k2,band,weight,grad\n";
  for (double lambda : levels) {
    const FermiSurfaceMesh mesh = extract_fermi_surface(bs, lambda, opt);
    const double gap = check_local_gap(*h, mesh, opt);
    const FermiMeasure m = fermi_measure(*h, mesh, gap, opt);
    if (c.format == "csv") {
      for (const auto& n : m.nodes) {
        if (sweep) os << fmt17(lambda) << ',';
        os << fmt17(n.k[0]) << ',' << fmt17(n.k[1]) << ',' << n.band << ',' << fmt17(n.weight) << ','
           << fmt17(n.grad) << '\n';
      }
    } else {
      out_levels.push_back(level_json(mesh, m));
    }
  }
  if (c.format == "csv") return {os.str(), kOk};
  doc["result"]["levels"] = std::move(out_levels);
  return {doc.dump(2) + "\n", kOk};
}

Output cmd_state(const Config& c) {
  const std::vector<double> levels = parse_levels(c, true);
  const SymbolPtr h = make_symbol(c);
  const GridSpec grid = parse_grid(c.grid, h->torus_dim());
  const MatrixField observable = make_observable(c, h);
  const BandStructure bs = sample_bands(h, grid, false);
  const FermiOptions opt = fermi_options(c);

  Rng rng(c.seed);
  std::vector<MatrixField> probes;
  for (int i = 0; i < 4; ++i) {
    auto p = std::make_shared<TrigPolynomialSymbol>(random_trig_polynomial(h->fiber_dim(), h->torus_dim(), 1, rng));
    probes.push_back([p](const KPoint& k) { return p->evaluate(k); });
  }
  const MatrixField identity = [n = h->fiber_dim()](const KPoint&) {
    return ComplexMatrix(ComplexMatrix::Identity(n, n));
  };

  Json doc = header(c, levels);
  Json out_levels = Json::array();
  std::ostringstream os;
  if (c.format == "csv") os << "lambda,omega_1,omega_H,eigen_defect,linear_defect,observable_re,observable_im\n";
  int code = kOk;
  for (double lambda : levels) {
    const FermiEigenstate st = fermi_eigenstate(bs, lambda, opt);
    const double omega_1 = st(identity).real();
    const double omega_h = st.energy().real();
    const double defect = st.quadratic_defect();
    double linear = 0.0;
    for (const auto& p : probes) linear = std::max(linear, st.linear_defect(p));
    const Complex value = st(observable);
    if (defect > c.state_tol) code = kDefectTooLarge;
    if (c.format == "csv") {
      os << fmt17(lambda) << ',' << fmt17(omega_1) << ',' << fmt17(omega_h) << ',' << fmt17(defect) << ','
         << fmt17(linear) << ',' << fmt17(value.real()) << ',' << fmt17(value.imag()) << '\n';
      continue;
    }
    Json lv;
    lv["lambda"] = lambda;
    lv["omega_1"] = omega_1;
    lv["omega_H"] = omega_h;
    lv["eigen_defect"] = defect;
    lv["linear_defect"] = linear;
    lv["observable"] = {{"name", c.observable}, {"re", value.real()}, {"im", value.imag()}};
    lv["gap"] = finite_or_null(st.measure().gap);
    lv["nodes"] = st.measure().nodes.size();
    out_levels.push_back(std::move(lv));
  }
  if (c.format == "csv") return {os.str(), code};
  doc["result"]["levels"] = std::move(out_levels);
  return {doc.dump(2) + "\n", code};
}

Output cmd_disintegrate(const Config& c) {
  const std::vector<double> levels = parse_levels(c, false);
  const GridSpec grid = parse_grid(c.grid, 1);
  const std::size_t n = grid.n1;

  Json doc = header(c, levels);
  Json result;
  PushforwardDensity density;
  std::vector<FiberMeasure> fibers;

  if (c.model == "linear-square") {
    const SquareDifferenceMap map(c.ell);
    density = map.pushforward(n);
    for (double y : levels) fibers.push_back(map.fiber(y));
  } else {
    std::optional<GridFunction1D> f;
    if (c.model == "identity") {
      f.emplace(Interval{-1.0, 1.0}, [](double x) { return x; }, n, [](double) { return 1.0; });
    } else if (c.model == "square") {
      f.emplace(Interval{-1.0, 1.0}, [](double x) { return x * x; }, n, [](double x) { return 2.0 * x; });
    } else if (c.model == "trig") {
      f.emplace(graphene_profile(c.gamma, n));
    } else {
      throw ConfigError("disintegrate --model must be identity, square, trig or linear-square");
    }
    const BranchMap map(*f);
    density = pushforward_1d(map, n);
    for (double y : levels) fibers.push_back(map.fiber(y));
  }

  std::ostringstream os;
  if (c.format == "csv") {
    if (levels.empty()) {
      os << "y,rho\n";
      for (std::size_t i = 0; i < density.y.size(); ++i) os << fmt17(density.y[i]) << ',' << fmt17(density.density[i]) << '\n';
    } else {
      os << "level,x1,x2,weight\n";
      for (const auto& fib : fibers)
        for (const auto& a : fib.atoms)
          os << fmt17(fib.level) << ',' << fmt17(a.point[0]) << ',' << fmt17(a.point[1]) << ',' << fmt17(a.weight)
             << '\n';
    }
    return {os.str(), kOk};
  }
  result["range"] = {density.range.lo, density.range.hi};
  result["density"] = {{"y", density.y}, {"rho", density.density}, {"total_mass", density.total_mass}};
  Json fj = Json::array();
  for (const auto& fib : fibers) {
    Json one;
    one["level"] = fib.level;
    one["kind"] = fib.kind == FiberKind::atomic ? "atomic" : "curve";
    Json atoms = Json::array();
    for (const auto& a : fib.atoms) {
      Json atom;
      atom["point"] = {a.point[0], a.point[1]};
      atom["weight"] = a.weight;
      atoms.push_back(std::move(atom));
    }
    one["atoms"] = std::move(atoms);
    fj.push_back(std::move(one));
  }
  result["fibers"] = std::move(fj);
  doc["result"] = std::move(result);
  return {doc.dump(2) + "\n", kOk};
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--model", c.model, "graphene | crossing | square | symbol file (disintegrate: identity | square | trig | linear-square)");
  sub->add_option("--gamma", c.gamma, "stagger potential of the graphene model and the trig profile");
  sub->add_option("--hopping", c.hopping, "off-diagonal coupling of the square model");
  sub->add_option("--ell", c.ell, "side length for linear-square");
  sub->add_option("--grid", c.grid, "N or N1xN2 (minimum 16 per axis)");
  sub->add_option("--lambda", c.lambda, "Fermi level");
  sub->add_option("--lambda-sweep", c.sweep, "min:max:count");
  sub->add_option("--tol-levelset", c.levelset_tol, "allowed |eps(k) - lambda| at surface nodes");
  sub->add_option("--tol-state", c.state_tol, "eigen-defect threshold of the state command");
  sub->add_option("--grad-floor", c.grad_floor, "critical-level threshold on |grad eps|");
  sub->add_option("--gap-floor", c.gap_floor, "minimal accepted local gap");
  sub->add_option("--format", c.format, "json | csv");
  sub->add_option("--out", c.out, "output file (default standard output)");
  sub->add_option("--seed", c.seed, "seed of the random probe observables");
  sub->add_option("--observable", c.observable, "identity | hamiltonian | diag:a,b,... | symbol file");
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::InvalidSymbol:
    case Errc::NonPositiveGamma:
    case Errc::LambdaOutOfBand:
    case Errc::ExtremeLevel:
    case Errc::ZeroLambda:
    case Errc::DimensionMismatch:
      return kConfigError;
    case Errc::EmptyFermiSurface:
    case Errc::EmptyFiber:
      return kEmptySurface;
    case Errc::GapViolation:
    case Errc::CriticalLevel:
    case Errc::CriticalValue:
      return kSingularLevel;
    default:
      return kNumericalFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Fermi surfaces, Fermi measures and Fermi eigenstates of periodic Hamiltonians", "fermi-spectra"};
  app.require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> commands{
      {"bands", "sample the band structure and its spectral union"},
      {"fermi", "extract the Fermi surface and its measure"},
      {"state", "evaluate the Fermi eigenstate"},
      {"disintegrate", "pushforward density and fibers of a 1-D or planar map"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), c);

  std::vector<const char*> argv{"fermi-spectra"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();

  Output result;
  try {
    check_tolerances(c);
    if (c.command == "bands")
      result = cmd_bands(c);
    else if (c.command == "fermi")
      result = cmd_fermi(c);
    else if (c.command == "state")
      result = cmd_state(c);
    else
      result = cmd_disintegrate(c);
  } catch (const ConfigError& e) {
    err << "fermi-spectra: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "fermi-spectra: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "fermi-spectra: " << e.what() << '\n';
    return kNumericalFailure;
  }

  if (c.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(c.out, std::ios::binary);
    if (!file) {
      err << "fermi-spectra: cannot write " << c.out << '\n';
      return kConfigError;
    }
    file << result.text;
  }
  if (result.code == kDefectTooLarge) err << "fermi-spectra: eigen defect exceeds --tol-state\n";
  return result.code;
}

}  // namespace fermi::cli
