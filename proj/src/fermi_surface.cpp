#include "fermi/fermi_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "fermi/errors.hpp"
#include "fermi/parallel.hpp"

namespace fermi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kBisectionSteps = 60;

double band_value(const HermitianSymbol& symbol, const KPoint& k, Index band) {
  return symbol.eigenvalues(k)(band);
}

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

KPoint wrap(const KPoint& k) { return {wrap_angle(k[0]), wrap_angle(k[1])}; }

double central_difference(const HermitianSymbol& symbol, const KPoint& k, Index band, int axis, double step) {
  KPoint up = k;
  KPoint down = k;
  up[axis] += step;
  down[axis] -= step;
  return (band_value(symbol, up, band) - band_value(symbol, down, band)) / (2.0 * step);
}

// Richardson extrapolation of two central differences: O(step^4) error.
double partial(const HermitianSymbol& symbol, const KPoint& k, Index band, int axis, double step) {
  const double coarse = central_difference(symbol, k, band, axis, step);
  const double fine = central_difference(symbol, k, band, axis, 0.5 * step);
  return (4.0 * fine - coarse) / 3.0;
}

double gradient_norm(const HermitianSymbol& symbol, const KPoint& k, Index band, double step) {
  const double g1 = partial(symbol, k, band, 0, step);
  if (symbol.torus_dim() == 1) return std::abs(g1);
  return std::hypot(g1, partial(symbol, k, band, 1, step));
}

Complex trace_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.transpose().cwiseProduct(y)).sum();
}

// Point on the segment a -> b where the band crosses lambda. `a_positive`
// is the sign of the grid value at a (values >= 0 count as positive).
KPoint bisect_crossing(const HermitianSymbol& symbol, Index band, double lambda, const KPoint& a, const KPoint& b,
                       bool a_positive) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kBisectionSteps; ++it) {
    const double m = 0.5 * (lo + hi);
    const KPoint p{a[0] + m * (b[0] - a[0]), a[1] + m * (b[1] - a[1])};
    ((band_value(symbol, p, band) - lambda >= 0.0) == a_positive ? lo : hi) = m;
  }
  const double t = 0.5 * (lo + hi);
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

struct CellSegment {
  std::size_t e0;
  std::size_t e1;
  KPoint p0;
  KPoint p1;
};

// Marching squares for one band on the periodic grid.
class BandContour {
 public:
  BandContour(const BandStructure& bs, Index band, double lambda)
      : bs_(bs), band_(band), lambda_(lambda), n1_(bs.grid().n1), n2_(bs.grid().n2),
        cache_(2 * n1_ * n2_), cached_(2 * n1_ * n2_, 0) {}

  std::vector<FermiPolyline> run() {
    std::vector<CellSegment> segments;
    for (std::size_t j = 0; j < n2_; ++j)
      for (std::size_t i = 0; i < n1_; ++i) march_cell(i, j, segments);
    return chain(segments);
  }

 private:
  bool positive(std::size_t i, std::size_t j) const {
    return bs_.energy(i % n1_, j % n2_, band_) - lambda_ >= 0.0;
  }

  static std::size_t h_id(std::size_t n1, std::size_t i, std::size_t j) { return 2 * (j * n1 + i); }
  static std::size_t v_id(std::size_t n1, std::size_t i, std::size_t j) { return 2 * (j * n1 + i) + 1; }

  bool is_cut(std::size_t id) const {
    const std::size_t node = id / 2;
    return id % 2 == 0 ? node / n1_ == 0 : node % n1_ == 0;
  }

  // Crossing on an edge in canonical coordinates (start vertex in the
  // fundamental cell).
  const KPoint& crossing(std::size_t id) {
    if (!cached_[id]) {
      const std::size_t node = id / 2;
      const std::size_t i = node % n1_;
      const std::size_t j = node / n1_;
      const KPoint a = bs_.grid().point(i, j);
      KPoint b = a;
      if (id % 2 == 0)
        b[0] = kTwoPi * static_cast<double>(i + 1) / static_cast<double>(n1_);
      else
        b[1] = kTwoPi * static_cast<double>(j + 1) / static_cast<double>(n2_);
      cache_[id] = bisect_crossing(bs_.symbol(), band_, lambda_, a, b, positive(i, j));
      cached_[id] = 1;
    }
    return cache_[id];
  }

  KPoint shifted(std::size_t id, double dx, double dy) {
    const KPoint& p = crossing(id);
    return {p[0] + dx, p[1] + dy};
  }

  void march_cell(std::size_t i, std::size_t j, std::vector<CellSegment>& out) {
    const bool s00 = positive(i, j);
    const bool s10 = positive(i + 1, j);
    const bool s11 = positive(i + 1, j + 1);
    const bool s01 = positive(i, j + 1);
    if (s00 == s10 && s10 == s11 && s11 == s01) return;

    const std::size_t ip = (i + 1) % n1_;
    const std::size_t jp = (j + 1) % n2_;
    const double wrap_x = i + 1 == n1_ ? kTwoPi : 0.0;
    const double wrap_y = j + 1 == n2_ ? kTwoPi : 0.0;
    struct Edge {
      std::size_t id;
      bool hit;
      KPoint p;
    };
    auto make = [&](std::size_t id, bool crosses, double dx, double dy) {
      return crosses ? Edge{id, true, shifted(id, dx, dy)} : Edge{id, false, {}};
    };
    const Edge bottom = make(h_id(n1_, i, j), s00 != s10, 0.0, 0.0);
    const Edge right = make(v_id(n1_, ip, j), s10 != s11, wrap_x, 0.0);
    const Edge top = make(h_id(n1_, i, jp), s01 != s11, 0.0, wrap_y);
    const Edge left = make(v_id(n1_, i, j), s00 != s01, 0.0, 0.0);
    auto emit = [&](const Edge& a, const Edge& b) { out.push_back({a.id, b.id, a.p, b.p}); };

    std::vector<const Edge*> hits;
    for (const Edge* e : {&bottom, &right, &top, &left})
      if (e->hit) hits.push_back(e);
    if (hits.size() == 2) {
      emit(*hits[0], *hits[1]);
      return;
    }
    // Saddle: decide with the band value at the cell centre.
    const KPoint c0 = bs_.grid().point(i, j);
    const KPoint centre{c0[0] + 0.5 * kTwoPi / static_cast<double>(n1_),
                        c0[1] + 0.5 * kTwoPi / static_cast<double>(n2_)};
    const bool sc = band_value(bs_.symbol(), centre, band_) - lambda_ >= 0.0;
    if (sc == s00) {
      emit(bottom, right);
      emit(top, left);
    } else {
      emit(left, bottom);
      emit(right, top);
    }
  }

  std::vector<FermiPolyline> chain(const std::vector<CellSegment>& segs) const {
    std::unordered_map<std::size_t, std::vector<std::size_t>> at_edge;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      at_edge[segs[s].e0].push_back(s);
      at_edge[segs[s].e1].push_back(s);
    }
    std::vector<char> used(segs.size(), 0);
    std::vector<FermiPolyline> lines;

    auto walk = [&](std::size_t s, bool from_e0) {
      FermiPolyline line;
      line.band = band_;
      const std::size_t start_edge = from_e0 ? segs[s].e0 : segs[s].e1;
      line.nodes.push_back({from_e0 ? segs[s].p0 : segs[s].p1, 0.0});
      std::size_t cur = s;
      bool forward = from_e0;
      for (;;) {
        used[cur] = 1;
        const std::size_t edge = forward ? segs[cur].e1 : segs[cur].e0;
        line.nodes.push_back({forward ? segs[cur].p1 : segs[cur].p0, 0.0});
        if (edge == start_edge) {
          line.closed = true;
          break;
        }
        if (is_cut(edge)) break;
        std::size_t next = segs.size();
        for (std::size_t cand : at_edge.at(edge))
          if (!used[cand]) {
            next = cand;
            break;
          }
        if (next == segs.size()) break;
        cur = next;
        forward = segs[cur].e0 == edge;
      }
      lines.push_back(std::move(line));
    };

    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (used[s]) continue;
      if (is_cut(segs[s].e0))
        walk(s, true);
      else if (is_cut(segs[s].e1))
        walk(s, false);
    }
    for (std::size_t s = 0; s < segs.size(); ++s)
      if (!used[s]) walk(s, true);
    return lines;
  }

  const BandStructure& bs_;
  Index band_;
  double lambda_;
  std::size_t n1_;
  std::size_t n2_;
  std::vector<KPoint> cache_;
  std::vector<char> cached_;
};

std::vector<FermiPolyline> roots_1d(const BandStructure& bs, Index band, double lambda) {
  const std::size_t n = bs.grid().n1;
  std::vector<FermiPolyline> lines;
  for (std::size_t i = 0; i < n; ++i) {
    const bool sa = bs.energy(i, 0, band) - lambda >= 0.0;
    const bool sb = bs.energy((i + 1) % n, 0, band) - lambda >= 0.0;
    if (sa == sb) continue;
    const KPoint a = bs.grid().point(i, 0);
    const KPoint b{kTwoPi * static_cast<double>(i + 1) / static_cast<double>(n), 0.0};
    FermiPolyline line;
    line.band = band;
    line.nodes.push_back({bisect_crossing(bs.symbol(), band, lambda, a, b, sa), 0.0});
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

double FermiPolyline::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    len += std::hypot(nodes[i + 1].k[0] - nodes[i].k[0], nodes[i + 1].k[1] - nodes[i].k[1]);
  return len;
}

std::size_t FermiSurfaceMesh::node_count() const {
  std::size_t n = 0;
  for (const auto& p : polylines) n += p.nodes.size();
  return n;
}

FermiSurfaceMesh extract_fermi_surface(const BandStructure& bs, double lambda, const FermiOptions& options) {
  FermiSurfaceMesh mesh;
  mesh.level = lambda;
  mesh.torus_dim = bs.torus_dim();
  for (Index b = 0; b < bs.band_count(); ++b) {
    if (!bs.band_range(b).contains(lambda)) continue;
    auto lines = bs.torus_dim() == 2 ? BandContour(bs, b, lambda).run() : roots_1d(bs, b, lambda);
    if (lines.empty()) continue;
    mesh.contributing_bands.push_back(b);
    for (auto& l : lines) mesh.polylines.push_back(std::move(l));
  }
  if (mesh.polylines.empty()) {
    std::ostringstream os;
    os << "no band reaches lambda = " << lambda;
    fail(Errc::EmptyFermiSurface, os.str());
  }

  std::vector<SurfaceNode*> flat;
  std::vector<Index> flat_band;
  for (auto& line : mesh.polylines)
    for (auto& node : line.nodes) {
      flat.push_back(&node);
      flat_band.push_back(line.band);
    }
  std::vector<double> residual(flat.size());
  const HermitianSymbol& symbol = bs.symbol();
  parallel_for(flat.size(), [&](std::size_t n) {
    const KPoint k = wrap(flat[n]->k);
    flat[n]->grad = gradient_norm(symbol, k, flat_band[n], options.fd_step);
    residual[n] = std::abs(band_value(symbol, k, flat_band[n]) - lambda);
  });

  for (std::size_t n = 0; n < flat.size(); ++n) {
    mesh.min_grad = std::min(mesh.min_grad, flat[n]->grad);
    if (flat[n]->grad <= options.grad_floor) {
      std::ostringstream os;
      os << "lambda = " << lambda << " is a critical level: |grad eps_" << flat_band[n] << "| = " << flat[n]->grad
         << " at k = (" << flat[n]->k[0] << ", " << flat[n]->k[1] << ")";
      fail(Errc::CriticalLevel, os.str());
    }
    if (residual[n] > options.levelset_tol) {
      std::ostringstream os;
      os << "surface node misses the level set by " << residual[n];
      fail(Errc::ConvergenceFailure, os.str());
    }
  }
  return mesh;
}

double check_local_gap(const HermitianSymbol& symbol, const FermiSurfaceMesh& mesh, const FermiOptions& options) {
  if (mesh.polylines.empty()) fail(Errc::InvalidArgument, "check_local_gap needs a non-empty mesh");
  double gap = std::numeric_limits<double>::infinity();
  if (symbol.fiber_dim() == 1) return gap;
  for (const auto& line : mesh.polylines)
    for (const auto& node : line.nodes) {
      const RealVector ev = symbol.eigenvalues(wrap(node.k));
      for (Index j = 0; j < ev.size(); ++j)
        if (j != line.band) gap = std::min(gap, std::abs(ev(j) - mesh.level));
    }
  if (gap <= options.gap_floor) {
    std::ostringstream os;
    os << "local gap " << gap << " at lambda = " << mesh.level << " does not exceed " << options.gap_floor;
    fail(Errc::GapViolation, os.str());
  }
  return gap;
}

double FermiMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.weight;
  return s;
}

std::vector<double> FermiMeasure::polyline_masses(std::size_t polyline_count) const {
  std::vector<double> mass(polyline_count, 0.0);
  for (const auto& n : nodes) mass.at(n.polyline) += n.weight;
  return mass;
}

FermiMeasure fermi_measure(const HermitianSymbol& symbol, const FermiSurfaceMesh& mesh, double gap,
                           const FermiOptions& options) {
  struct Task {
    KPoint mid;
    double length;
    Index band;
    std::size_t polyline;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < mesh.polylines.size(); ++p) {
    const auto& line = mesh.polylines[p];
    if (mesh.torus_dim == 1) {
      for (const auto& node : line.nodes) tasks.push_back({node.k, 1.0, line.band, p});
      continue;
    }
    for (std::size_t i = 0; i + 1 < line.nodes.size(); ++i) {
      const KPoint& a = line.nodes[i].k;
      const KPoint& b = line.nodes[i + 1].k;
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      if (len == 0.0) continue;
      tasks.push_back({{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])}, len, line.band, p});
    }
  }

  const double proj_tol = std::isfinite(gap) ? gap / 3.0 : std::numeric_limits<double>::infinity();
  FermiMeasure measure;
  measure.level = mesh.level;
  measure.gap = gap;
  measure.torus_dim = mesh.torus_dim;
  measure.nodes.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    FermiNode& node = measure.nodes[t];
    node.k = wrap(task.mid);
    node.band = task.band;
    node.polyline = task.polyline;
    node.grad = gradient_norm(symbol, node.k, task.band, options.fd_step);
    if (node.grad <= options.grad_floor) {
      std::ostringstream os;
      os << "|grad eps| = " << node.grad << " at a quadrature node";
      fail(Errc::CriticalLevel, os.str());
    }
    node.raw_weight = task.length / node.grad;
    node.h = symbol.evaluate(node.k);
    const EigenDecomposition dec = eig_hermitian(HermitianMatrix(node.h));
    const HermitianMatrix p = spectral_projection(dec, mesh.level, proj_tol);
    node.rho = p.matrix() / p.matrix().trace().real();
  });

  for (const auto& n : measure.nodes) measure.raw_mass += n.raw_weight;
  if (!(measure.raw_mass > 0.0)) fail(Errc::NormalizationFailure, "Fermi measure has no mass");
  for (auto& n : measure.nodes) n.weight = n.raw_weight / measure.raw_mass;
  return measure;
}

FermiEigenstate::FermiEigenstate(FermiMeasure measure) : measure_(std::move(measure)) {}

Complex FermiEigenstate::operator()(const MatrixField& a) const {
  Complex acc{};
  for (const auto& n : measure_.nodes) acc += n.weight * trace_product(n.rho, a(n.k));
  return acc;
}

Complex FermiEigenstate::energy() const {
  Complex acc{};
  for (const auto& n : measure_.nodes) acc += n.weight * trace_product(n.rho, n.h);
  return acc;
}

double FermiEigenstate::quadratic_defect() const {
  double acc = 0.0;
  for (const auto& n : measure_.nodes) {
    const ComplexMatrix s = n.h - measure_.level * ComplexMatrix::Identity(n.h.rows(), n.h.cols());
    acc += n.weight * trace_product(n.rho, s * s).real();
  }
  return acc;
}

double FermiEigenstate::linear_defect(const MatrixField& a) const {
  Complex with_h{};
  Complex plain{};
  for (const auto& n : measure_.nodes) {
    const ComplexMatrix ak = a(n.k);
    with_h += n.weight * trace_product(n.rho, ak * n.h);
    plain += n.weight * trace_product(n.rho, ak);
  }
  return std::abs(with_h - measure_.level * plain);
}

FermiEigenstate fermi_eigenstate(const BandStructure& bs, double lambda, const FermiOptions& options) {
  if (lambda == 0.0) fail(Errc::ZeroLambda, "the Fermi eigenstate needs lambda != 0; shift H by a scalar");
  const FermiSurfaceMesh mesh = extract_fermi_surface(bs, lambda, options);
  const double gap = check_local_gap(bs.symbol(), mesh, options);
  return FermiEigenstate(fermi_measure(bs.symbol(), mesh, gap, options));
}

}  // namespace fermi
