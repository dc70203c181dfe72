#include "specreg/pseudospec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <omp.h>

#include "specreg/eig.hpp"
#include "specreg/error.hpp"
#include "specreg/linalg.hpp"
#include "specreg/spectral.hpp"

namespace specreg {

GridRegion GridRegion::disc(cplx center, double radius, int resolution) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("grid region: disc radius must be positive");
  }
  if (resolution < kMinResolution) {
    throw InvalidInput("grid region: resolution must be at least 8");
  }
  GridRegion g;
  g.disc_ = true;
  g.center_ = center;
  g.radius_ = radius;
  g.lo_ = center - cplx(radius, radius);
  g.hi_ = center + cplx(radius, radius);
  g.resolution_ = resolution;
  return g;
}

GridRegion GridRegion::rect(cplx lower_left, cplx upper_right, int resolution) {
  if (!(upper_right.real() > lower_left.real()) || !(upper_right.imag() > lower_left.imag())) {
    throw InvalidInput("grid region: rectangle must have positive area");
  }
  if (resolution < kMinResolution) {
    throw InvalidInput("grid region: resolution must be at least 8");
  }
  GridRegion g;
  g.disc_ = false;
  g.lo_ = lower_left;
  g.hi_ = upper_right;
  g.center_ = 0.5 * (lower_left + upper_right);
  g.resolution_ = resolution;
  return g;
}

double GridRegion::area() const {
  if (disc_) return std::numbers::pi * radius_ * radius_;
  return (hi_.real() - lo_.real()) * (hi_.imag() - lo_.imag());
}

double GridRegion::cell_width() const { return (hi_.real() - lo_.real()) / resolution_; }
double GridRegion::cell_height() const { return (hi_.imag() - lo_.imag()) / resolution_; }
double GridRegion::cell_diameter() const { return std::hypot(cell_width(), cell_height()); }

bool GridRegion::contains(cplx z) const {
  if (disc_) return std::abs(z - center_) <= radius_;
  return z.real() >= lo_.real() && z.real() <= hi_.real() && z.imag() >= lo_.imag() &&
         z.imag() <= hi_.imag();
}

bool in_pseudospectrum(const DenseMatrix& m, cplx z, double epsilon) {
  require_square(m, "in_pseudospectrum");
  return kernel::shifted_smallest_singular_value(m.data(), z) <= epsilon;
}

namespace {

// Uniform lattice of nx * ny cells with lower-left corner `origin`.
struct Lattice {
  cplx origin;
  double hx = 0.0, hy = 0.0;
  std::int64_t nx = 0, ny = 0;
  bool disc = true;
  cplx center;
  double radius = 0.0;

  double half_diag() const { return 0.5 * std::hypot(hx, hy); }
  cplx cell_center(std::int64_t i, std::int64_t j) const {
    return origin + cplx((static_cast<double>(i) + 0.5) * hx, (static_cast<double>(j) + 0.5) * hy);
  }
};

Lattice lattice_of(const GridRegion& r, std::int64_t resolution) {
  Lattice l;
  l.origin = r.lower_left();
  l.nx = l.ny = resolution;
  l.hx = (r.upper_right().real() - r.lower_left().real()) / static_cast<double>(resolution);
  l.hy = (r.upper_right().imag() - r.lower_left().imag()) / static_cast<double>(resolution);
  l.disc = r.is_disc();
  l.center = r.center();
  l.radius = r.radius();
  return l;
}

struct Counts {
  std::int64_t inside = 0;
  std::int64_t perimeter = 0;
};

// Classification of a single cell from its center value.
Counts classify(const Lattice& l, cplx c, double sigma, double eps) {
  const double r = l.half_diag();
  Counts out;
  if (l.disc) {
    const double d = std::abs(c - l.center);
    const bool in_region = d <= l.radius;
    const bool straddles = std::abs(d - l.radius) <= r;
    if (in_region && sigma <= eps) out.inside = 1;
    const bool sigma_uncertain = std::abs(sigma - eps) <= r && d <= l.radius + r;
    const bool region_uncertain = straddles && sigma <= eps + r;
    if (sigma_uncertain || region_uncertain) out.perimeter = 1;
  } else {
    if (sigma <= eps) out.inside = 1;
    if (std::abs(sigma - eps) <= r) out.perimeter = 1;
  }
  return out;
}

struct Block {
  std::int64_t i0, i1, j0, j1;
  std::int64_t cells() const { return (i1 - i0) * (j1 - j0); }
};

// Maximum distance from the block's geometric center to any cell center in it.
double center_spread(const Lattice& l, const Block& b) {
  const double w = static_cast<double>(b.i1 - b.i0 - 1) * l.hx;
  const double h = static_cast<double>(b.j1 - b.j0 - 1) * l.hy;
  return 0.5 * std::hypot(w, h);
}

cplx block_center(const Lattice& l, const Block& b) {
  const double ci = 0.5 * static_cast<double>(b.i0 + b.i1);
  const double cj = 0.5 * static_cast<double>(b.j0 + b.j1);
  return l.origin + cplx(ci * l.hx, cj * l.hy);
}

enum class Decision { Empty, Full, Split };

// Decides a block from one sigma evaluation at its center when the Lipschitz
// bound allows it.
Decision decide(const Lattice& l, const Block& b, const CMatrix& m, double eps) {
  const double r = l.half_diag();
  const double spread = center_spread(l, b);
  const cplx bc = block_center(l, b);
  if (l.disc) {
    const double d = std::abs(bc - l.center);
    if (d - spread > l.radius + r) return Decision::Empty;
  }
  const double sigma = kernel::shifted_smallest_singular_value(m, bc);
  if (sigma - spread > eps + r) return Decision::Empty;
  if (sigma + spread < eps - r) {
    if (!l.disc) return Decision::Full;
    const double d = std::abs(bc - l.center);
    if (d + spread < l.radius - r) return Decision::Full;
  }
  return Decision::Split;
}

Counts evaluate_leaf(const Lattice& l, const Block& b, const CMatrix& m, double eps) {
  Counts acc;
  for (std::int64_t j = b.j0; j < b.j1; ++j) {
    for (std::int64_t i = b.i0; i < b.i1; ++i) {
      const cplx c = l.cell_center(i, j);
      if (l.disc && std::abs(c - l.center) > l.radius + l.half_diag()) continue;
      const double sigma = kernel::shifted_smallest_singular_value(m, c);
      const Counts k = classify(l, c, sigma, eps);
      acc.inside += k.inside;
      acc.perimeter += k.perimeter;
    }
  }
  return acc;
}

constexpr std::int64_t kLeafCells = 16;

std::pair<Block, Block> split(const Block& b) {
  if (b.i1 - b.i0 >= b.j1 - b.j0) {
    const std::int64_t mid = b.i0 + (b.i1 - b.i0) / 2;
    return {Block{b.i0, mid, b.j0, b.j1}, Block{mid, b.i1, b.j0, b.j1}};
  }
  const std::int64_t mid = b.j0 + (b.j1 - b.j0) / 2;
  return {Block{b.i0, b.i1, b.j0, mid}, Block{b.i0, b.i1, mid, b.j1}};
}

Counts count_block(const Lattice& l, const Block& b, const CMatrix& m, double eps) {
  if (b.cells() <= kLeafCells) return evaluate_leaf(l, b, m, eps);
  switch (decide(l, b, m, eps)) {
    case Decision::Empty:
      return {};
    case Decision::Full:
      return {b.cells(), 0};
    case Decision::Split:
      break;
  }
  const auto [a, c] = split(b);
  const Counts x = count_block(l, a, m, eps);
  const Counts y = count_block(l, c, m, eps);
  return {x.inside + y.inside, x.perimeter + y.perimeter};
}

Counts count_pruned(const Lattice& l, const CMatrix& m, double eps) {
  // Breadth-first expansion to a frontier large enough to share among
  // threads, then independent recursion per frontier block. Counts are
  // integers, so the sum does not depend on scheduling.
  std::vector<Block> frontier{Block{0, l.nx, 0, l.ny}};
  Counts settled;
  const std::size_t target = 64 * static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
  for (int round = 0; round < 24 && !frontier.empty() && frontier.size() < target; ++round) {
    std::vector<Block> next;
    for (const Block& b : frontier) {
      if (b.cells() <= kLeafCells) {
        next.push_back(b);
        continue;
      }
      switch (decide(l, b, m, eps)) {
        case Decision::Empty:
          break;
        case Decision::Full:
          settled.inside += b.cells();
          break;
        case Decision::Split: {
          const auto [a, c] = split(b);
          next.push_back(a);
          next.push_back(c);
        }
      }
    }
    if (next.size() == frontier.size()) {
      frontier = std::move(next);
      break;
    }
    frontier = std::move(next);
  }

  std::int64_t inside = settled.inside;
  std::int64_t perimeter = settled.perimeter;
  const auto count = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel for schedule(dynamic) reduction(+ : inside, perimeter)
  for (std::int64_t k = 0; k < count; ++k) {
    const Counts c = count_block(l, frontier[static_cast<std::size_t>(k)], m, eps);
    inside += c.inside;
    perimeter += c.perimeter;
  }
  return {inside, perimeter};
}

PseudospectrumEstimate make_estimate(const Lattice& l, Counts c, double eps) {
  PseudospectrumEstimate e;
  e.epsilon = eps;
  e.inside_cells = c.inside;
  e.perimeter_cells = c.perimeter;
  e.cell_area = l.hx * l.hy;
  e.volume = static_cast<double>(c.inside) * e.cell_area;
  e.volume_error_bound = static_cast<double>(c.perimeter) * e.cell_area;
  return e;
}

void check_volume_args(const DenseMatrix& m, const GridRegion& region, double epsilon) {
  require_square(m, "pseudospectrum_volume");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("pseudospectrum_volume: epsilon must be positive");
  }
  if (region.resolution() > GridRegion::kMaxResolution) {
    throw InvalidInput("pseudospectrum_volume: resolution exceeds 4096 cells per axis");
  }
}

}  // namespace

PseudospectrumEstimate pseudospectrum_volume(const DenseMatrix& m, const GridRegion& region,
                                             double epsilon) {
  check_volume_args(m, region, epsilon);
  const Lattice l = lattice_of(region, region.resolution());
  return make_estimate(l, count_pruned(l, m.data(), epsilon), epsilon);
}

PseudospectrumEstimate pseudospectrum_volume_reference(const DenseMatrix& m,
                                                       const GridRegion& region,
                                                       double epsilon) {
  check_volume_args(m, region, epsilon);
  const Lattice l = lattice_of(region, region.resolution());
  Counts acc;
  for (std::int64_t j = 0; j < l.ny; ++j) {
    for (std::int64_t i = 0; i < l.nx; ++i) {
      const cplx c = l.cell_center(i, j);
      const double sigma = kernel::shifted_smallest_singular_value(m.data(), c);
      const Counts k = classify(l, c, sigma, epsilon);
      acc.inside += k.inside;
      acc.perimeter += k.perimeter;
    }
  }
  return make_estimate(l, acc, epsilon);
}

VolLimitResult vol_limit_check(const DenseMatrix& m, const GridRegion& region,
                               const std::vector<double>& epsilons) {
  require_square(m, "vol_limit_check");
  if (epsilons.empty()) throw InvalidInput("vol_limit_check: epsilon list is empty");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw InvalidInput("vol_limit_check: epsilons must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw InvalidInput("vol_limit_check: epsilons must be strictly descending");
    }
    if (region.cell_diameter() > epsilons[k] / 4.0) {
      std::ostringstream msg;
      msg << "vol_limit_check: epsilon " << epsilons[k] << " needs cell diameter <= eps/4 = "
          << epsilons[k] / 4.0 << " but the grid has " << region.cell_diameter()
          << "; increase the resolution";
      throw ResolutionError(msg.str());
    }
  }

  const SpectralDecomposition dec = eig(m);
  const auto kappas = eigenvalue_condition_numbers(dec);
  VolLimitResult out;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (region.contains(dec.eigenvalues(static_cast<Eigen::Index>(i)))) {
      out.target += kappas[i] * kappas[i];
    }
  }
  for (double eps : epsilons) {
    VolLimitPoint p;
    p.epsilon = eps;
    p.estimate = pseudospectrum_volume(m, region, eps);
    const double disc = std::numbers::pi * eps * eps;
    p.ratio = p.estimate.volume / disc;
    p.ratio_error = p.estimate.volume_error_bound / disc;
    out.points.push_back(p);
  }
  return out;
}

VolBoundResult vol_bound_check(const DenseMatrix& m, const VolBoundOptions& opts) {
  require_square(m, "vol_bound_check");
  if (m.rows() < 2) throw InvalidInput("vol_bound_check: need n >= 2");
  const SpectralDecomposition dec = eig(m);
  const ConditionReport rep = condition_report(dec);
  const double n = static_cast<double>(m.rows());

  VolBoundResult out;
  out.kappa2 = rep.kappa2;
  out.gap = rep.gap;
  out.epsilon = rep.gap / (2.0 * n * rep.kappa2);
  out.region_radius = 2.0 * dec.source_norm;
  out.rhs = std::numbers::pi / 8.0 * rep.kappa2 * rep.kappa2;

  // Square grid of side 2R with cell diameter 2R*sqrt(2)/res <= eps/4.
  const double needed = 8.0 * std::numbers::sqrt2 * out.region_radius / out.epsilon;
  if (!(needed <= static_cast<double>(opts.max_resolution))) {
    std::ostringstream msg;
    msg << "vol_bound_check: epsilon " << out.epsilon << " needs " << needed
        << " cells per axis, above the limit " << opts.max_resolution;
    throw ResolutionError(msg.str());
  }
  out.resolution = std::max<std::int64_t>(GridRegion::kMinResolution,
                                          static_cast<std::int64_t>(std::ceil(needed)));

  Lattice l;
  l.disc = true;
  l.center = 0.0;
  l.radius = out.region_radius;
  l.origin = cplx(-out.region_radius, -out.region_radius);
  l.nx = l.ny = out.resolution;
  l.hx = l.hy = 2.0 * out.region_radius / static_cast<double>(out.resolution);

  out.estimate = make_estimate(l, count_pruned(l, m.data(), out.epsilon), out.epsilon);
  const double e2 = out.epsilon * out.epsilon;
  out.lhs = out.estimate.volume / e2;
  out.lhs_lower = (out.estimate.volume - out.estimate.volume_error_bound) / e2;
  out.lhs_upper = (out.estimate.volume + out.estimate.volume_error_bound) / e2;
  out.pass = out.lhs_lower >= out.rhs;
  return out;
}

}  // namespace specreg
