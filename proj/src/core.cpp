#include "hrvlab/core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hrvlab {

TailIndex::TailIndex(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("tail index must be finite and > 0, got " + std::to_string(value));
  }
}

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError("probability must lie in [0,1], got " + std::to_string(value));
  }
}

double support_min(const ScalarLaw& l) {
  struct {
    double operator()(const law::Pareto&) const { return 1.0; }
    double operator()(const law::UnitExponential&) const { return 0.0; }
    double operator()(const law::ShiftedUnitExponential&) const { return 1.0; }
    double operator()(const law::PointMass& p) const { return p.c; }
  } visitor;
  return std::visit(visitor, l);
}

double tail_exponent(const ScalarLaw& l) {
  if (const auto* p = std::get_if<law::Pareto>(&l)) return p->alpha.value();
  return std::numeric_limits<double>::infinity();
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : RngStream(seed, splitmix64(seed)) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t key)
    : seed_(seed), key_(key), engine_(key) {}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(key_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

double RngStream::uniform_open() {
  // 53 random bits centred in their cell: (m + 0.5) / 2^53 is never 0 or 1.
  const std::uint64_t m = engine_() >> 11;
  return (static_cast<double>(m) + 0.5) * 0x1.0p-53;
}

double sample_one(const ScalarLaw& l, RngStream& rng) {
  struct {
    RngStream& rng;
    double operator()(const law::Pareto& p) const {
      return std::pow(rng.uniform_open(), -1.0 / p.alpha.value());
    }
    double operator()(const law::UnitExponential&) const { return -std::log(rng.uniform_open()); }
    double operator()(const law::ShiftedUnitExponential&) const {
      return 1.0 - std::log(rng.uniform_open());
    }
    double operator()(const law::PointMass& p) const { return p.c; }
  } visitor{rng};
  return std::visit(visitor, l);
}

std::vector<double> sample_scalar(const ScalarLaw& l, std::size_t n, RngStream& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = sample_one(l, rng);
  return out;
}

int bernoulli(double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("bernoulli probability must lie in [0,1], got " + std::to_string(p));
  }
  return rng.uniform_open() < p ? 1 : 0;
}

}  // namespace hrvlab
