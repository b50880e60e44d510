#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hrvlab/core.hpp"

namespace hrvlab {

/// One bivariate observation.
struct Point {
  double z1;
  double z2;
  friend bool operator==(const Point&, const Point&) = default;
};

namespace angular {
struct Uniform01 {
  friend bool operator==(const Uniform01&, const Uniform01&) = default;
};
/// W = a with probability prob_a, else b.
struct TwoPoint {
  double a;
  double b;
  Probability prob_a;
  friend bool operator==(const TwoPoint&, const TwoPoint&) = default;
};
struct PointMass {
  double w;
  friend bool operator==(const PointMass&, const PointMass&) = default;
};
}  // namespace angular

/// Law of W in [0,1]; the angle on the L1 unit sphere is (W, 1-W).
using AngularLawE = std::variant<angular::Uniform01, angular::TwoPoint, angular::PointMass>;

void validate(const AngularLawE& a);
double sample_angle(const AngularLawE& a, RngStream& rng);

/// Hidden angular law on the two-piece sphere {min(x1,x2) = 1}:
/// Theta0 = B (Theta1, 1) + (1 - B)(1, Theta2), P[B = 1] = p, Theta_i ~ g_i.
struct HiddenAngularSpec {
  Probability p;
  ScalarLaw g1;
  ScalarLaw g2;
  friend bool operator==(const HiddenAngularSpec&, const HiddenAngularSpec&) = default;
};

void validate(const HiddenAngularSpec& s);

namespace gen {

/// R * (W, 1 - W), R ~ Pareto(alpha).
struct RadialAngularE {
  TailIndex alpha;
  AngularLawE angular;
  friend bool operator==(const RadialAngularE&, const RadialAngularE&) = default;
};

/// R0 * Theta0 with R0 ~ Pareto(alpha0).
struct HiddenE0 {
  TailIndex alpha0;
  HiddenAngularSpec angular;
  friend bool operator==(const HiddenE0&, const HiddenE0&) = default;
};

/// B (xi, 0) + (1 - B)(0, xi) with a single switch B ~ Bernoulli(axis_prob).
/// The magnitude law is Pareto(alpha) for the canned experiments; other laws
/// (PointMass(0) in particular) are accepted for structural tests.
struct AxesY {
  ScalarLaw magnitude;
  Probability axis_prob;

  static AxesY pareto(double alpha, double axis_prob) {
    return {law::Pareto{TailIndex(alpha)}, Probability(axis_prob)};
  }
  friend bool operator==(const AxesY&, const AxesY&) = default;
};

/// Independent Pareto(alpha) coordinates.
struct IidParetoPair {
  TailIndex alpha;
  friend bool operator==(const IidParetoPair&, const IidParetoPair&) = default;
};

/// B R (theta, 1) + (1 - B) R (1, theta), R ~ Pareto(alpha0), P[B = 1] = p.
struct RadialRatio {
  TailIndex alpha0;
  ScalarLaw theta;
  Probability p;
  friend bool operator==(const RadialRatio&, const RadialRatio&) = default;
};

/// B Y + (1 - B) V with P[B = 1] = mix_prob.
struct Mixture {
  Probability mix_prob;
  AxesY y;
  HiddenE0 v;
  friend bool operator==(const Mixture&, const Mixture&) = default;
};

using AdditiveY = std::variant<AxesY, IidParetoPair>;
using AdditiveV = std::variant<IidParetoPair, HiddenE0, RadialRatio, RadialAngularE>;

/// Y + V with Y, V independent.
struct Additive {
  AdditiveY y;
  AdditiveV v;
  friend bool operator==(const Additive&, const Additive&) = default;
};

}  // namespace gen

using GeneratorSpec =
    std::variant<gen::RadialAngularE, gen::HiddenE0, gen::AxesY, gen::Mixture, gen::Additive>;

void validate(const GeneratorSpec& spec);

/// Regimes of the additive model with axes-supported Y and a V carrying
/// both an E-index alpha_star and an E0-index alpha0.
enum class Regime { Case1, Case2, Case3 };

const char* to_string(Regime r);

/// Regime from sign(alpha_star - (alpha0 - alpha)); empty when not applicable.
std::optional<Regime> additive_regime(const gen::Additive& a);

struct BatchMeta {
  std::string spec_fingerprint;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t partitions = 1;
  std::string rng = std::string(RngStream::kIdentity);
};

struct SampleBatch {
  std::vector<Point> pairs;
  BatchMeta meta;
};

/// Components behind one hidden-E0 draw.
struct HiddenDraw {
  Point point;
  double radius;
  double theta;
  bool first_larger;
};

HiddenDraw draw_hidden(double alpha0, Probability p, const ScalarLaw& g1, const ScalarLaw& g2,
                       RngStream& rng);

Point draw_axes_y(const gen::AxesY& y, RngStream& rng);

SampleBatch gen_radial_angular_E(TailIndex alpha, const AngularLawE& angular, std::size_t n,
                                 RngStream& rng);
SampleBatch gen_hidden_E0(TailIndex alpha0, const HiddenAngularSpec& angular, std::size_t n,
                          RngStream& rng);
SampleBatch gen_axes_Y(const gen::AxesY& y, std::size_t n, RngStream& rng);
SampleBatch gen_mixture(Probability mix_prob, const gen::AxesY& y, const gen::HiddenE0& v,
                        std::size_t n, RngStream& rng);
SampleBatch gen_additive(const gen::AdditiveY& y, const gen::AdditiveV& v, std::size_t n,
                         RngStream& rng);

/// Draws n points for any spec from the given stream.
SampleBatch generate_from(const GeneratorSpec& spec, std::size_t n, RngStream& rng);

/// Seeded entry point. The batch is split into `partitions` contiguous chunks,
/// chunk i drawn from RngStream(seed).substream(i); chunks are generated on
/// up to `threads` worker threads. Output depends on (spec, n, seed,
/// partitions) only.
SampleBatch generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed,
                     std::size_t partitions = 1, std::size_t threads = 1);

/// Hex FNV-1a of the canonical JSON form.
std::string fingerprint(const GeneratorSpec& spec);

}  // namespace hrvlab
