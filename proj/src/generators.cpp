#include "hrvlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "hrvlab/spec_json.hpp"

namespace hrvlab {

namespace {

constexpr std::uint64_t kSwitchStream = 0;
constexpr std::uint64_t kYStream = 1;
constexpr std::uint64_t kVStream = 2;

double draw_pareto(double alpha, RngStream& rng) {
  return std::pow(rng.uniform_open(), -1.0 / alpha);
}

void require_unit_support(const ScalarLaw& l, const char* what) {
  if (!(support_min(l) >= 1.0)) {
    throw ConfigError(std::string(what) + " must be supported on [1, inf)");
  }
}

Point draw_radial(const gen::RadialAngularE& s, RngStream& rng) {
  const double r = draw_pareto(s.alpha.value(), rng);
  const double w = sample_angle(s.angular, rng);
  const double z1 = r * w;
  // Keep z1 + z2 == r bit-exactly. When z1 carries a bit below ulp(r), every
  // candidate sum is a rounding tie and r may be unreachable, so z1 itself is
  // moved by an ulp as a last resort.
  for (double c1 : {z1, std::nextafter(z1, 0.0), std::nextafter(z1, INFINITY)}) {
    if (c1 < 0.0 || c1 > r) continue;
    double z2 = r - c1;
    for (int i = 0; i < 3 && c1 + z2 != r; ++i) {
      z2 = std::nextafter(z2, c1 + z2 > r ? 0.0 : INFINITY);
    }
    if (c1 + z2 == r && z2 >= 0.0) return {c1, z2};
  }
  return {z1, r - z1};
}

Point draw_v(const gen::AdditiveV& v, RngStream& rng) {
  struct {
    RngStream& rng;
    Point operator()(const gen::IidParetoPair& s) const {
      const double a = draw_pareto(s.alpha.value(), rng);
      const double b = draw_pareto(s.alpha.value(), rng);
      return {a, b};
    }
    Point operator()(const gen::HiddenE0& s) const {
      return draw_hidden(s.alpha0.value(), s.angular.p, s.angular.g1, s.angular.g2, rng).point;
    }
    Point operator()(const gen::RadialRatio& s) const {
      return draw_hidden(s.alpha0.value(), s.p, s.theta, s.theta, rng).point;
    }
    Point operator()(const gen::RadialAngularE& s) const { return draw_radial(s, rng); }
  } visitor{rng};
  return std::visit(visitor, v);
}

Point draw_y(const gen::AdditiveY& y, RngStream& rng) {
  if (const auto* axes = std::get_if<gen::AxesY>(&y)) return draw_axes_y(*axes, rng);
  const double alpha = std::get<gen::IidParetoPair>(y).alpha.value();
  const double a = draw_pareto(alpha, rng);
  const double b = draw_pareto(alpha, rng);
  return {a, b};
}

SampleBatch make_batch(const GeneratorSpec& spec, std::vector<Point> pairs, std::uint64_t seed) {
  SampleBatch b;
  b.meta.spec_fingerprint = fingerprint(spec);
  b.meta.seed = seed;
  b.meta.n = pairs.size();
  b.pairs = std::move(pairs);
  return b;
}

std::vector<Point> draw_points(const GeneratorSpec& spec, std::size_t n, RngStream& rng) {
  std::vector<Point> out;
  out.reserve(n);
  if (const auto* s = std::get_if<gen::RadialAngularE>(&spec)) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw_radial(*s, rng));
  } else if (const auto* s = std::get_if<gen::HiddenE0>(&spec)) {
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(
          draw_hidden(s->alpha0.value(), s->angular.p, s->angular.g1, s->angular.g2, rng).point);
    }
  } else if (const auto* s = std::get_if<gen::AxesY>(&spec)) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw_axes_y(*s, rng));
  } else if (const auto* s = std::get_if<gen::Mixture>(&spec)) {
    RngStream sw = rng.substream(kSwitchStream);
    RngStream ys = rng.substream(kYStream);
    RngStream vs = rng.substream(kVStream);
    const auto& h = s->v;
    for (std::size_t i = 0; i < n; ++i) {
      if (bernoulli(s->mix_prob, sw) == 1) {
        out.push_back(draw_axes_y(s->y, ys));
      } else {
        out.push_back(
            draw_hidden(h.alpha0.value(), h.angular.p, h.angular.g1, h.angular.g2, vs).point);
      }
    }
  } else {
    const auto& a = std::get<gen::Additive>(spec);
    RngStream ys = rng.substream(kYStream);
    RngStream vs = rng.substream(kVStream);
    for (std::size_t i = 0; i < n; ++i) {
      const Point y = draw_y(a.y, ys);
      const Point v = draw_v(a.v, vs);
      out.push_back({y.z1 + v.z1, y.z2 + v.z2});
    }
  }
  return out;
}

}  // namespace

void validate(const AngularLawE& a) {
  auto in01 = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (const auto* t = std::get_if<angular::TwoPoint>(&a)) {
    if (!in01(t->a) || !in01(t->b)) throw ConfigError("two_point angular atoms must lie in [0,1]");
  } else if (const auto* p = std::get_if<angular::PointMass>(&a)) {
    if (!in01(p->w)) throw ConfigError("angular point mass must lie in [0,1]");
  }
}

double sample_angle(const AngularLawE& a, RngStream& rng) {
  if (std::holds_alternative<angular::Uniform01>(a)) return rng.uniform_open();
  if (const auto* t = std::get_if<angular::TwoPoint>(&a)) {
    return bernoulli(t->prob_a, rng) == 1 ? t->a : t->b;
  }
  return std::get<angular::PointMass>(a).w;
}

void validate(const HiddenAngularSpec& s) {
  require_unit_support(s.g1, "hidden angular law g1");
  require_unit_support(s.g2, "hidden angular law g2");
}

void validate(const GeneratorSpec& spec) {
  struct {
    void operator()(const gen::RadialAngularE& r) const { validate(r.angular); }
    void operator()(const gen::HiddenE0& h) const { validate(h.angular); }
    void operator()(const gen::AxesY& y) const {
      if (!(support_min(y.magnitude) >= 0.0)) throw ConfigError("axes_y magnitude must be >= 0");
    }
    void operator()(const gen::Mixture& m) const {
      (*this)(m.y);
      (*this)(m.v);
    }
    void operator()(const gen::Additive& a) const {
      if (const auto* y = std::get_if<gen::AxesY>(&a.y)) (*this)(*y);
      if (const auto* h = std::get_if<gen::HiddenE0>(&a.v)) (*this)(*h);
      if (const auto* r = std::get_if<gen::RadialAngularE>(&a.v)) (*this)(*r);
      if (const auto* r = std::get_if<gen::RadialRatio>(&a.v)) {
        require_unit_support(r->theta, "radial_ratio theta law");
      }
    }
  } visitor;
  std::visit(visitor, spec);
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Case1: return "case1";
    case Regime::Case2: return "case2";
    case Regime::Case3: return "case3";
  }
  return "?";
}

std::optional<Regime> additive_regime(const gen::Additive& a) {
  const auto* y = std::get_if<gen::AxesY>(&a.y);
  if (y == nullptr) return std::nullopt;
  const auto* pareto = std::get_if<law::Pareto>(&y->magnitude);
  if (pareto == nullptr) return std::nullopt;
  const double alpha = pareto->alpha.value();

  double alpha_star = 0.0;
  double alpha0 = 0.0;
  if (const auto* v = std::get_if<gen::IidParetoPair>(&a.v)) {
    alpha_star = v->alpha.value();
    alpha0 = 2.0 * alpha_star;
  } else if (const auto* v = std::get_if<gen::RadialRatio>(&a.v)) {
    alpha0 = v->alpha0.value();
    alpha_star = std::min(alpha0, tail_exponent(v->theta));
  } else if (const auto* v = std::get_if<gen::HiddenE0>(&a.v)) {
    alpha0 = v->alpha0.value();
    alpha_star = std::min({alpha0, tail_exponent(v->angular.g1), tail_exponent(v->angular.g2)});
  } else {
    alpha0 = alpha_star = std::get<gen::RadialAngularE>(a.v).alpha.value();
  }
  const double diff = alpha_star - (alpha0 - alpha);
  if (std::abs(diff) <= 1e-12) return Regime::Case3;
  return diff < 0.0 ? Regime::Case1 : Regime::Case2;
}

HiddenDraw draw_hidden(double alpha0, Probability p, const ScalarLaw& g1, const ScalarLaw& g2,
                       RngStream& rng) {
  const double r = draw_pareto(alpha0, rng);
  const bool first = bernoulli(p, rng) == 1;
  const double theta = sample_one(first ? g1 : g2, rng);
  // Choose the product (and, when no neighbour of r * theta divides back to
  // theta, r itself) within a few ulps so that hi / r reproduces theta.
  double radius = r;
  double hi = r * theta;
  bool exact = false;
  double up = r, down = r;
  for (int step = 0; step <= 8 && !exact; ++step) {
    double cand_r = r;
    if (step > 0) {
      if (step % 2 == 1) {
        up = std::nextafter(up, INFINITY);
        cand_r = up;
      } else {
        down = std::nextafter(down, 0.0);
        cand_r = down;
      }
    }
    if (cand_r < 1.0) continue;
    const double prod = cand_r * theta;
    for (double c : {prod, std::nextafter(prod, 0.0), std::nextafter(prod, INFINITY)}) {
      if (c >= cand_r && c / cand_r == theta) {
        radius = cand_r;
        hi = c;
        exact = true;
        break;
      }
    }
  }
  HiddenDraw d;
  d.point = first ? Point{hi, radius} : Point{radius, hi};
  d.radius = radius;
  d.theta = hi / radius;
  d.first_larger = first;
  return d;
}

Point draw_axes_y(const gen::AxesY& y, RngStream& rng) {
  const bool horizontal = bernoulli(y.axis_prob, rng) == 1;
  const double xi = sample_one(y.magnitude, rng);
  return horizontal ? Point{xi, 0.0} : Point{0.0, xi};
}

SampleBatch gen_radial_angular_E(TailIndex alpha, const AngularLawE& angular, std::size_t n,
                                 RngStream& rng) {
  return generate_from(gen::RadialAngularE{alpha, angular}, n, rng);
}

SampleBatch gen_hidden_E0(TailIndex alpha0, const HiddenAngularSpec& angular, std::size_t n,
                          RngStream& rng) {
  return generate_from(gen::HiddenE0{alpha0, angular}, n, rng);
}

SampleBatch gen_axes_Y(const gen::AxesY& y, std::size_t n, RngStream& rng) {
  return generate_from(y, n, rng);
}

SampleBatch gen_mixture(Probability mix_prob, const gen::AxesY& y, const gen::HiddenE0& v,
                        std::size_t n, RngStream& rng) {
  return generate_from(gen::Mixture{mix_prob, y, v}, n, rng);
}

SampleBatch gen_additive(const gen::AdditiveY& y, const gen::AdditiveV& v, std::size_t n,
                         RngStream& rng) {
  return generate_from(gen::Additive{y, v}, n, rng);
}

SampleBatch generate_from(const GeneratorSpec& spec, std::size_t n, RngStream& rng) {
  validate(spec);
  return make_batch(spec, draw_points(spec, n, rng), rng.seed());
}

SampleBatch generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed,
                     std::size_t partitions, std::size_t threads) {
  validate(spec);
  if (partitions == 0) throw UsageError("partition count must be >= 1");
  const RngStream root(seed);
  std::vector<std::vector<Point>> chunks(partitions);
  auto fill = [&](std::size_t i) {
    const std::size_t size = n / partitions + (i < n % partitions ? 1 : 0);
    RngStream s = root.substream(i);
    chunks[i] = draw_points(spec, size, s);
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, partitions);
  if (workers == 1) {
    for (std::size_t i = 0; i < partitions; ++i) fill(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < partitions; i += workers) fill(i);
      });
    }
  }
  std::vector<Point> pairs;
  pairs.reserve(n);
  for (auto& c : chunks) pairs.insert(pairs.end(), c.begin(), c.end());
  SampleBatch b = make_batch(spec, std::move(pairs), seed);
  b.meta.partitions = partitions;
  return b;
}

std::string fingerprint(const GeneratorSpec& spec) {
  const std::string canonical = to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hrvlab
