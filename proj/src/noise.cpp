#include "specreg/noise.hpp"

#include <cmath>
#include <numbers>

#include "specreg/error.hpp"

namespace specreg {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t key : stream) h = mix64(h ^ mix64(key + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
    : engine_(derive_seed(seed, stream)) {}

double StreamRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double StreamRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

NoiseLaw NoiseLaw::parse(std::string_view name) {
  if (name == "real-gaussian") return NoiseLaw(LawKind::RealGaussian);
  if (name == "real-uniform") return NoiseLaw(LawKind::RealUniform);
  if (name == "complex-gaussian") return NoiseLaw(LawKind::ComplexGaussian);
  throw InvalidInput("unknown noise law '" + std::string(name) +
                     "' (expected real-gaussian, real-uniform or complex-gaussian)");
}

std::string NoiseLaw::name() const {
  switch (kind_) {
    case LawKind::RealGaussian:
      return "real-gaussian";
    case LawKind::RealUniform:
      return "real-uniform";
    case LawKind::ComplexGaussian:
      return "complex-gaussian";
  }
  return {};
}

double NoiseLaw::density_bound() const {
  switch (kind_) {
    case LawKind::RealGaussian:
      return 1.0 / std::sqrt(2.0 * std::numbers::pi);
    case LawKind::RealUniform:
      return 1.0 / (2.0 * std::sqrt(3.0));
    case LawKind::ComplexGaussian:
      return 1.0 / std::numbers::pi;
  }
  return 0.0;
}

cplx NoiseLaw::sample(StreamRng& rng) const {
  switch (kind_) {
    case LawKind::RealGaussian:
      return {rng.normal(), 0.0};
    case LawKind::RealUniform:
      return {std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0), 0.0};
    case LawKind::ComplexGaussian: {
      const double re = rng.normal();
      const double im = rng.normal();
      return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }
  }
  return {};
}

double NoiseLaw::real_part_cdf(double x) const {
  switch (kind_) {
    case LawKind::RealGaussian:
      return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    case LawKind::RealUniform: {
      const double a = std::sqrt(3.0);
      if (x <= -a) return 0.0;
      if (x >= a) return 1.0;
      return (x + a) / (2.0 * a);
    }
    case LawKind::ComplexGaussian:
      // Real part ~ N(0, 1/2).
      return 0.5 * std::erfc(-x);
  }
  return 0.0;
}

namespace kernel {

CMatrix sample_gn(const NoiseLaw& law, Eigen::Index n, StreamRng& rng) {
  CMatrix g(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = scale * law.sample(rng);
  }
  return g;
}

}  // namespace kernel

DenseMatrix sample_gn(const NoiseLaw& law, std::size_t n, StreamRng& rng) {
  if (n == 0) throw InvalidInput("sample_gn: n must be positive");
  return DenseMatrix(kernel::sample_gn(law, static_cast<Eigen::Index>(n), rng),
                     law.is_complex() ? Field::Complex : Field::Real);
}

DenseMatrix sample_gn(const NoiseLaw& law, std::size_t n, std::uint64_t seed) {
  StreamRng rng(seed, {});
  return sample_gn(law, n, rng);
}

}  // namespace specreg
