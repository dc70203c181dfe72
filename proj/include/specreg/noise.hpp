#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>

#include "specreg/matrix.hpp"

namespace specreg {

/// Deterministic generator keyed by (seed, stream ids). Two generators with
/// different keys are statistically independent; the same key always yields
/// the same sequence, independent of thread or platform.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

enum class LawKind { RealGaussian, RealUniform, ComplexGaussian };

/// Closed catalog of unit-variance, sub-Gaussian laws with bounded density.
class NoiseLaw {
 public:
  explicit NoiseLaw(LawKind kind) : kind_(kind) {}

  /// "real-gaussian" | "real-uniform" | "complex-gaussian"; anything else is
  /// rejected with InvalidInput.
  static NoiseLaw parse(std::string_view name);

  LawKind kind() const noexcept { return kind_; }
  bool is_complex() const noexcept { return kind_ == LawKind::ComplexGaussian; }
  std::string name() const;

  /// Supremum K of the density: of the real line for real laws, of the
  /// plane for the complex law.
  double density_bound() const;

  cplx sample(StreamRng& rng) const;

  /// CDF of the real part of one draw (used by goodness-of-fit tests).
  double real_part_cdf(double x) const;

  friend bool operator==(const NoiseLaw&, const NoiseLaw&) = default;

 private:
  LawKind kind_;
};

/// G_n(xi): n x n, iid entries xi / sqrt(n), filled row by row.
DenseMatrix sample_gn(const NoiseLaw& law, std::size_t n, StreamRng& rng);
DenseMatrix sample_gn(const NoiseLaw& law, std::size_t n, std::uint64_t seed);

namespace kernel {
CMatrix sample_gn(const NoiseLaw& law, Eigen::Index n, StreamRng& rng);
}  // namespace kernel

}  // namespace specreg
