#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hrvlab/diagnostics.hpp"
#include "hrvlab/generators.hpp"
#include "hrvlab/spec_json.hpp"
#include "hrvlab/transforms.hpp"

using namespace hrvlab;

namespace {

HiddenAngularSpec shifted(double p) {
  return {Probability(p), law::ShiftedUnitExponential{}, law::ShiftedUnitExponential{}};
}

std::vector<double> mins_of(const std::vector<Point>& pts) {
  std::vector<double> m;
  for (const auto& p : pts) m.push_back(std::min(p.z1, p.z2));
  return m;
}

}  // namespace

TEST(RadialAngular, PointMassAngleOnHorizontalAxis) {
  RngStream rng(1);
  const auto b = gen_radial_angular_E(TailIndex(1.0), angular::PointMass{1.0}, 3, rng);
  ASSERT_EQ(b.pairs.size(), 3u);
  for (const auto& p : b.pairs) {
    EXPECT_GE(p.z1, 1.0);
    EXPECT_EQ(p.z2, 0.0);
  }
}

TEST(RadialAngular, HillOfNormRecoversAlpha) {
  RngStream rng(12);
  const auto b = gen_radial_angular_E(TailIndex(2.0), angular::Uniform01{}, 100000, rng);
  std::vector<double> norms;
  for (const auto& p : b.pairs) norms.push_back(p.z1 + p.z2);
  EXPECT_NEAR(hill_alpha(norms, 2000), 2.0, 0.2);
}

TEST(RadialAngular, NormIsExactRadius) {
  RngStream rng(3);
  const auto b = gen_radial_angular_E(TailIndex(1.5), angular::Uniform01{}, 5000, rng);
  RngStream replay(3);
  for (const auto& p : b.pairs) {
    const double r = std::pow(replay.uniform_open(), -1.0 / 1.5);
    replay.uniform_open();
    EXPECT_EQ(p.z1 + p.z2, r);
  }
}

TEST(RadialAngular, SameSeedSameBatch) {
  RngStream a(5), b(5);
  const auto x = gen_radial_angular_E(TailIndex(1.0), angular::Uniform01{}, 1000, a);
  const auto y = gen_radial_angular_E(TailIndex(1.0), angular::Uniform01{}, 1000, b);
  EXPECT_EQ(x.pairs, y.pairs);
  EXPECT_EQ(x.meta.spec_fingerprint, y.meta.spec_fingerprint);
}

TEST(RadialAngular, TwoPointAnglesOnlyHitAtoms) {
  RngStream rng(8);
  const auto b = gen_radial_angular_E(
      TailIndex(1.0), angular::TwoPoint{0.25, 0.75, Probability(0.5)}, 2000, rng);
  for (const auto& p : b.pairs) {
    const double w = gpolar_origin(p).angle_w;
    EXPECT_TRUE(std::abs(w - 0.25) < 1e-12 || std::abs(w - 0.75) < 1e-12) << w;
  }
}

TEST(HiddenE0, DegenerateRatioIsExact) {
  RngStream rng(4);
  const auto b = gen_hidden_E0(TailIndex(2.0),
                               {Probability(1.0), law::PointMass{5.0}, law::PointMass{5.0}}, 2, rng);
  for (const auto& p : b.pairs) {
    EXPECT_GE(p.z2, 1.0);
    EXPECT_EQ(p.z1, 5.0 * p.z2);
    EXPECT_EQ(p.z1 / p.z2, 5.0);
  }
}

TEST(HiddenE0, MinHillNearAlpha0) {
  RngStream rng(31);
  const auto b = gen_hidden_E0(TailIndex(2.0), shifted(0.5), 10000, rng);
  EXPECT_NEAR(hill_alpha(mins_of(b.pairs), 500), 2.0, 0.3);
}

TEST(HiddenE0, RadiusIsMinAndThetaIsRatio) {
  RngStream rng(6);
  for (int i = 0; i < 5000; ++i) {
    const auto d = draw_hidden(2.0, Probability(0.5), law::ShiftedUnitExponential{},
                               law::Pareto{TailIndex(1.0)}, rng);
    const auto pa = gpolar_axes(d.point);
    EXPECT_EQ(pa.radius, std::min(d.point.z1, d.point.z2));
    EXPECT_EQ(pa.radius, d.radius);
    EXPECT_EQ(pa.theta, d.theta);
    if (d.theta > 1.0) {
      EXPECT_EQ(pa.which_larger == Larger::First, d.first_larger);
    }
  }
}

TEST(HiddenE0, RejectsAngularLawBelowOne) {
  RngStream rng(1);
  EXPECT_THROW(gen_hidden_E0(TailIndex(2.0),
                             {Probability(0.5), law::UnitExponential{}, law::ShiftedUnitExponential{}},
                             10, rng),
               ConfigError);
}

TEST(AxesY, OnAxes) {
  RngStream rng(2);
  const auto b = gen_axes_Y(gen::AxesY::pareto(0.5, 0.5), 10000, rng);
  std::vector<double> maxes;
  for (const auto& p : b.pairs) {
    EXPECT_EQ(p.z1 * p.z2, 0.0);
    maxes.push_back(std::max(p.z1, p.z2));
  }
  EXPECT_NEAR(hill_alpha(maxes, 500), 0.5, 0.1);
}

TEST(AxesY, AxisProbOneIsHorizontal) {
  RngStream rng(2);
  const auto b = gen_axes_Y(gen::AxesY::pareto(1.0, 1.0), 1000, rng);
  for (const auto& p : b.pairs) {
    EXPECT_GT(p.z1, 0.0);
    EXPECT_EQ(p.z2, 0.0);
  }
}

TEST(Mixture, DegenerateProbabilitiesReproduceComponents) {
  const auto y = gen::AxesY::pareto(1.0, 0.5);
  const gen::HiddenE0 v{TailIndex(2.0), shifted(0.5)};
  RngStream rng(10);
  const auto all_y = gen_mixture(Probability(1.0), y, v, 500, rng);
  RngStream ys = RngStream(10).substream(1);
  EXPECT_EQ(all_y.pairs, gen_axes_Y(y, 500, ys).pairs);

  RngStream rng2(10);
  const auto all_v = gen_mixture(Probability(0.0), y, v, 500, rng2);
  RngStream vs = RngStream(10).substream(2);
  EXPECT_EQ(all_v.pairs, gen_hidden_E0(v.alpha0, v.angular, 500, vs).pairs);
}

TEST(Mixture, FractionOnAxes) {
  RngStream rng(13);
  const auto b = gen_mixture(Probability(0.5), gen::AxesY::pareto(1.0, 0.5),
                             {TailIndex(2.0), shifted(0.5)}, 10000, rng);
  const auto m = mins_of(b.pairs);
  const double frac = double(std::count(m.begin(), m.end(), 0.0)) / m.size();
  EXPECT_NEAR(frac, 0.5, 0.02);
}

TEST(Additive, IidPairHiddenIndex) {
  RngStream rng(21);
  const auto b = gen_additive(gen::AxesY::pareto(0.5, 0.5), gen::IidParetoPair{TailIndex(1.0)},
                              10000, rng);
  EXPECT_NEAR(hill_alpha(mins_of(b.pairs), 500), 1.5, 0.3);
}

TEST(Additive, RadialRatioHiddenIndex) {
  RngStream rng(22);
  const auto b = gen_additive(
      gen::AxesY::pareto(0.5, 0.5),
      gen::RadialRatio{TailIndex(1.25), law::Pareto{TailIndex(1.0)}, Probability(0.5)}, 10000, rng);
  EXPECT_NEAR(hill_alpha(mins_of(b.pairs), 500), 1.25, 0.25);
}

TEST(Additive, ZeroYLeavesVUnchanged) {
  const gen::AxesY zero{law::PointMass{0.0}, Probability(0.5)};
  const gen::HiddenE0 v{TailIndex(2.0), shifted(0.4)};
  RngStream rng(99);
  const auto b = gen_additive(zero, v, 1000, rng);
  RngStream vs = RngStream(99).substream(2);
  EXPECT_EQ(b.pairs, gen_hidden_E0(v.alpha0, v.angular, 1000, vs).pairs);
}

TEST(Additive, RegimeTags) {
  const auto y = gen::AxesY::pareto(0.5, 0.5);
  const law::Pareto th{TailIndex(1.0)};
  EXPECT_EQ(additive_regime({y, gen::IidParetoPair{TailIndex(1.0)}}), Regime::Case1);
  EXPECT_EQ(additive_regime({y, gen::RadialRatio{TailIndex(1.25), th, Probability(0.5)}}),
            Regime::Case2);
  EXPECT_EQ(additive_regime({y, gen::RadialRatio{TailIndex(1.5), th, Probability(0.5)}}),
            Regime::Case3);
  EXPECT_FALSE(additive_regime({gen::IidParetoPair{TailIndex(1.0)}, gen::IidParetoPair{TailIndex(1.0)}}));
}

TEST(Generate, PartitionedOutputIndependentOfThreads) {
  const GeneratorSpec spec = gen::HiddenE0{TailIndex(2.0), shifted(0.5)};
  const auto a = generate(spec, 10007, 5, 8, 1);
  const auto b = generate(spec, 10007, 5, 8, 4);
  EXPECT_EQ(a.pairs.size(), 10007u);
  EXPECT_EQ(a.pairs, b.pairs);
  EXPECT_EQ(a.meta.partitions, 8u);
  const auto c = generate(spec, 10007, 6, 8, 4);
  EXPECT_NE(a.pairs, c.pairs);
}

TEST(Generate, SinglePartitionMatchesSubstreamZero) {
  const GeneratorSpec spec = gen::AxesY::pareto(1.0, 0.5);
  RngStream s = RngStream(17).substream(0);
  EXPECT_EQ(generate(spec, 300, 17).pairs, generate_from(spec, 300, s).pairs);
  EXPECT_TRUE(generate(spec, 0, 17).pairs.empty());
}

TEST(SpecJson, RoundTripAllVariants) {
  const law::Pareto th{TailIndex(1.0)};
  const std::vector<GeneratorSpec> specs{
      gen::RadialAngularE{TailIndex(2.0), angular::Uniform01{}},
      gen::RadialAngularE{TailIndex(1.0), angular::TwoPoint{0.1, 0.9, Probability(0.3)}},
      gen::RadialAngularE{TailIndex(1.0), angular::PointMass{1.0}},
      gen::HiddenE0{TailIndex(2.0), shifted(0.6)},
      gen::AxesY::pareto(0.5, 0.5),
      gen::AxesY{law::PointMass{0.0}, Probability(0.2)},
      gen::Mixture{Probability(0.5), gen::AxesY::pareto(1.0, 0.5), {TailIndex(2.0), shifted(0.6)}},
      gen::Additive{gen::AxesY::pareto(0.5, 0.5), gen::IidParetoPair{TailIndex(1.0)}},
      gen::Additive{gen::AxesY::pareto(0.5, 0.5), gen::RadialRatio{TailIndex(1.5), th, Probability(0.5)}},
      gen::Additive{gen::IidParetoPair{TailIndex(1.0)},
                    gen::RadialAngularE{TailIndex(1.0), angular::Uniform01{}}},
      gen::Additive{gen::AxesY::pareto(1.0, 0.5), gen::HiddenE0{TailIndex(2.0), shifted(0.5)}},
  };
  for (const auto& s : specs) {
    const auto j = to_json(s);
    const auto back = spec_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back, s) << j.dump();
    EXPECT_EQ(fingerprint(back), fingerprint(s));
  }
}

TEST(SpecJson, ErrorsNameTheField) {
  auto err = [](const char* text) {
    try {
      spec_from_json(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(err(R"({"type":"hidden_e0","alpha0":-1,"angular":{"p":0.5,"g1":{"kind":"shifted_unit_exponential"},"g2":{"kind":"shifted_unit_exponential"}}})")
                .find("alpha0"),
            std::string::npos);
  EXPECT_NE(err(R"({"type":"nope"})").find("type"), std::string::npos);
  EXPECT_NE(err(R"({"type":"axes_y","alpha":0.5,"axis_prob":2})").find("axis_prob"),
            std::string::npos);
  EXPECT_NE(err(R"({"type":"additive","y":{"type":"axes_y","alpha":0.5},"v":{"type":"iid_pareto_pair","alpha":1},"regime":"case2"})")
                .find("regime"),
            std::string::npos);
}
