#pragma once

#include <cstdint>
#include <vector>

#include "specreg/matrix.hpp"

namespace specreg {

/// Uniform cell grid over a disc (its bounding square) or an axis-aligned
/// rectangle. Cells are classified by their centers.
class GridRegion {
 public:
  static constexpr int kMinResolution = 8;
  static constexpr int kMaxResolution = 4096;

  static GridRegion disc(cplx center, double radius, int resolution);
  static GridRegion rect(cplx lower_left, cplx upper_right, int resolution);

  bool is_disc() const noexcept { return disc_; }
  cplx center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  cplx lower_left() const noexcept { return lo_; }
  cplx upper_right() const noexcept { return hi_; }
  int resolution() const noexcept { return resolution_; }

  /// Exact area of the region (not of the grid).
  double area() const;
  double cell_width() const;
  double cell_height() const;
  double cell_diameter() const;
  bool contains(cplx z) const;

 private:
  GridRegion() = default;
  bool disc_ = true;
  cplx center_{};
  double radius_ = 0.0;
  cplx lo_{}, hi_{};
  int resolution_ = 0;
};

struct PseudospectrumEstimate {
  double epsilon = 0.0;
  std::int64_t inside_cells = 0;
  /// Cells whose classification could flip somewhere inside the cell.
  std::int64_t perimeter_cells = 0;
  double cell_area = 0.0;
  double volume = 0.0;
  double volume_error_bound = 0.0;
};

/// sigma_n(M - zI) <= epsilon.
bool in_pseudospectrum(const DenseMatrix& m, cplx z, double epsilon);

/// vol(Lambda_eps(M) ∩ region) by cell-center sampling with a rigorous
/// bracket. sigma_n(M - zI) is 1-Lipschitz in z, so whole blocks of cells are
/// classified from one evaluation whenever the Lipschitz bound decides them;
/// the result is identical to evaluating every cell. Parallel over blocks.
PseudospectrumEstimate pseudospectrum_volume(const DenseMatrix& m, const GridRegion& region,
                                             double epsilon);

/// Evaluates every cell center serially. Reference for the pruned kernel.
PseudospectrumEstimate pseudospectrum_volume_reference(const DenseMatrix& m,
                                                       const GridRegion& region,
                                                       double epsilon);

struct VolLimitPoint {
  double epsilon = 0.0;
  PseudospectrumEstimate estimate;
  /// volume / (pi eps^2)
  double ratio = 0.0;
  /// volume_error_bound / (pi eps^2)
  double ratio_error = 0.0;
};

struct VolLimitResult {
  /// sum of kappa(lambda_i)^2 over eigenvalues inside the region.
  double target = 0.0;
  std::vector<VolLimitPoint> points;
};

/// Ratios vol(Lambda_eps ∩ B)/(pi eps^2) over a descending epsilon list,
/// together with their eps -> 0 limit sum_{lambda_i in B} kappa(lambda_i)^2.
/// Every epsilon must satisfy cell_diameter <= eps / 4 (ResolutionError).
VolLimitResult vol_limit_check(const DenseMatrix& m, const GridRegion& region,
                               const std::vector<double>& epsilons);

struct VolBoundOptions {
  /// Largest cells-per-axis the sparse lattice may use.
  std::int64_t max_resolution = std::int64_t{1} << 22;
};

struct VolBoundResult {
  bool pass = false;
  double epsilon = 0.0;
  double lhs = 0.0;        // vol / eps^2
  double lhs_lower = 0.0;  // (vol - error) / eps^2
  double lhs_upper = 0.0;
  double rhs = 0.0;        // (pi/8) kappa2^2
  double kappa2 = 0.0;
  double gap = 0.0;
  double region_radius = 0.0;
  std::int64_t resolution = 0;
  PseudospectrumEstimate estimate;
};

/// Checks vol(Lambda_eps ∩ D(0, 2||M||)) / eps^2 >= (pi/8) kappa2^2 at
/// eps = eta / (2 n kappa2). The grid is chosen so that its cell diameter is
/// eps/4; pass requires the lower end of the volume bracket to clear the bound.
VolBoundResult vol_bound_check(const DenseMatrix& m, const VolBoundOptions& opts = {});

}  // namespace specreg
