#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "hrvlab/errors.hpp"

namespace hrvlab {

/// Positive tail exponent (alpha, alpha0, alpha_star).
class TailIndex {
 public:
  explicit TailIndex(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(const TailIndex&, const TailIndex&) = default;

 private:
  double value_;
};

/// Probability in [0, 1].
class Probability {
 public:
  explicit Probability(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(const Probability&, const Probability&) = default;

 private:
  double value_;
};

namespace law {
/// Survival x^(-alpha) on [1, inf).
struct Pareto {
  TailIndex alpha;
  friend bool operator==(const Pareto&, const Pareto&) = default;
};
struct UnitExponential {
  friend bool operator==(const UnitExponential&, const UnitExponential&) = default;
};
/// 1 + Exp(1), supported on [1, inf).
struct ShiftedUnitExponential {
  friend bool operator==(const ShiftedUnitExponential&, const ShiftedUnitExponential&) = default;
};
struct PointMass {
  double c;
  friend bool operator==(const PointMass&, const PointMass&) = default;
};
}  // namespace law

using ScalarLaw = std::variant<law::Pareto, law::UnitExponential,
                               law::ShiftedUnitExponential, law::PointMass>;

/// Lower end of the support of a law.
double support_min(const ScalarLaw& l);

/// Pareto index of the law's right tail, or +inf for light tails.
double tail_exponent(const ScalarLaw& l);

/// Seeded random stream with derivable independent sub-streams.
///
/// The output of next_u64() is the std::mt19937_64 sequence for a 64-bit key,
/// which the standard fixes bit-for-bit. Keys are derived from (seed, stream
/// path) with the splitmix64 finalizer, so substream(i) never depends on how
/// many values the parent has already produced.
class RngStream {
 public:
  static constexpr std::string_view kIdentity =
      "mt19937_64/splitmix64-substreams/v1";

  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t key() const noexcept { return key_; }

  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open();

 private:
  RngStream(std::uint64_t seed, std::uint64_t key);

  std::uint64_t seed_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

double sample_one(const ScalarLaw& l, RngStream& rng);

std::vector<double> sample_scalar(const ScalarLaw& l, std::size_t n, RngStream& rng);

/// Returns 1 with probability p. Throws ConfigError if p is outside [0, 1].
int bernoulli(double p, RngStream& rng);
inline int bernoulli(Probability p, RngStream& rng) { return bernoulli(p.value(), rng); }

}  // namespace hrvlab
