#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hrvlab/diagnostics.hpp"
#include "hrvlab/generators.hpp"
#include "oracles.hpp"

using namespace hrvlab;

namespace {

std::vector<std::size_t> full_grid(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> g;
  for (std::size_t k = lo; k <= hi; ++k) g.push_back(k);
  return g;
}

std::vector<double> pareto(double alpha, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  return sample_scalar(law::Pareto{TailIndex(alpha)}, n, rng);
}

}  // namespace

TEST(Hill, HandExample) {
  const double e = std::numbers::e;
  EXPECT_DOUBLE_EQ(hill_alpha(std::vector<double>{e * e * e, e * e, e, 1.0}, 3), 0.5);
}

TEST(Hill, ScaleInvariantSeries) {
  const auto x = pareto(1.0, 500, 3);
  std::vector<double> y(x);
  for (auto& v : y) v *= 1024.0;
  const auto g = full_grid(1, 499);
  const auto a = hill_series(x, g);
  const auto b = hill_series(y, g);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_NEAR(a.points[i].value, b.points[i].value, 1e-12 * a.points[i].value);
  }
}

TEST(Hill, ParetoRecovery) {
  EXPECT_NEAR(hill_alpha(pareto(1.0, 100000, 8), 2000), 1.0, 0.1);
}

TEST(Hill, SeriesMatchesOracle) {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 100; ++rep) {
    const auto in = oracle::random_instance(g, 3 + g() % 48);
    const auto grid = full_grid(1, in.xi.size() - 1);
    const auto s = hill_series(in.xi, grid);
    for (const auto& p : s.points) {
      const double o = oracle::hill(in.xi, p.k);
      if (std::isinf(o)) {
        EXPECT_TRUE(std::isinf(p.value));
      } else {
        EXPECT_NEAR(p.value, o, 1e-12 * std::max(1.0, std::abs(o)));
      }
    }
  }
}

TEST(Hill, Preconditions) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(hill_alpha(x, 0), UsageError);
  EXPECT_THROW(hill_alpha(x, 3), UsageError);
  EXPECT_THROW(hill_alpha(std::vector<double>{1, 0, 3}, 1), DomainError);
  const std::vector<std::size_t> bad{2, 1};
  EXPECT_THROW(hill_series(x, bad), UsageError);
}

TEST(Hillish, ConcordantIsZero) {
  const std::vector<double> xi{1, 2};
  EXPECT_DOUBLE_EQ(hillish(xi, xi, 2), 0.0);
}

TEST(Hillish, DiscordantHalfLogTwoSquared) {
  const std::vector<double> xi{1, 2};
  const std::vector<double> eta{-1, -2};
  EXPECT_NEAR(hillish(xi, eta, 2), 0.5 * std::log(2.0) * std::log(2.0), 1e-15);
  EXPECT_NEAR(hillish(xi, eta, 2), 0.2402265069591007, 1e-15);
}

TEST(Hillish, IndependentParetoNearOne) {
  const auto xi = pareto(1.0, 10000, 21);
  const auto eta = pareto(1.0, 10000, 22);
  std::vector<double> neg(eta);
  for (auto& v : neg) v = -v;
  EXPECT_NEAR(hillish(xi, eta, 1000), 1.0, 0.1);
  EXPECT_NEAR(hillish(xi, neg, 1000), 1.0, 0.1);
}

TEST(Hillish, InvariantUnderMonotoneMapsOfEachCoordinate) {
  const auto xi = pareto(1.0, 2000, 5);
  const auto eta = pareto(2.0, 2000, 6);
  std::vector<double> xi2(xi), eta2(eta);
  for (auto& v : xi2) v = std::log(v) + 3.0;
  for (auto& v : eta2) v = std::sqrt(v) * 10.0;
  for (std::size_t k : {2u, 10u, 100u, 1999u}) {
    EXPECT_DOUBLE_EQ(hillish(xi, eta, k), hillish(xi2, eta2, k));
    EXPECT_DOUBLE_EQ(pickandsish(xi, eta, std::max<std::size_t>(k, 4), 0.8),
                     pickandsish(xi2, eta, std::max<std::size_t>(k, 4), 0.8));
  }
}

TEST(Hillish, MatchesOracle) {
  std::mt19937_64 g(12);
  for (int rep = 0; rep < 100; ++rep) {
    const auto in = oracle::random_instance(g, 2 + g() % 49);
    const ConcomitantTable t(in.xi, in.eta);
    const auto s = hillish_series(t, full_grid(2, in.xi.size()));
    for (const auto& p : s.points) {
      EXPECT_NEAR(p.value, oracle::hillish(in.xi, in.eta, p.k), 1e-12);
    }
  }
}

TEST(Hillish, Preconditions) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(hillish(x, x, 1), UsageError);
  EXPECT_THROW(hillish(x, x, 4), UsageError);
  EXPECT_THROW(hillish(x, std::vector<double>{1, 2}, 2), UsageError);
}

TEST(Pickandsish, HandExample) {
  const std::vector<double> xi{8, 7, 6, 5};
  const std::vector<double> eta{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(pickandsish(xi, eta, 4, 0.5), 1.0);
}

TEST(Pickandsish, ConstantEtaIsDomainError) {
  const std::vector<double> xi{8, 7, 6, 5, 4};
  const std::vector<double> eta(5, 2.0);
  EXPECT_THROW(pickandsish(xi, eta, 5, 0.8), DomainError);
}

TEST(Pickandsish, IndependentNearZero) {
  const auto xi = pareto(1.0, 10000, 31);
  RngStream rng(32);
  const auto eta = sample_scalar(law::UnitExponential{}, 10000, rng);
  EXPECT_LE(std::abs(pickandsish(xi, eta, 1000, 0.8)), 0.15);
}

TEST(Pickandsish, AffineInvariantInEta) {
  const auto xi = pareto(1.0, 3000, 41);
  const auto eta = pareto(1.5, 3000, 42);
  std::vector<double> eta2(eta);
  for (auto& v : eta2) v = 7.0 * v - 2.0;
  for (std::size_t k : {4u, 50u, 1000u}) {
    EXPECT_NEAR(pickandsish(xi, eta, k, 0.8), pickandsish(xi, eta2, k, 0.8), 1e-9);
  }
}

TEST(Pickandsish, MatchesOracle) {
  std::mt19937_64 g(13);
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto in = oracle::random_instance(g, 4 + g() % 47);
    const unsigned tenths = 1 + g() % 9;
    const ConcomitantTable t(in.xi, in.eta);
    for (std::size_t k = 4; k <= in.xi.size(); ++k) {
      const auto o = oracle::pickandsish(in.xi, in.eta, k, tenths);
      if (!o) {
        EXPECT_THROW(pickandsish(t, k, tenths / 10.0), DomainError);
      } else {
        EXPECT_NEAR(pickandsish(t, k, tenths / 10.0), *o, 1e-12 * std::max(1.0, std::abs(*o)));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Pickandsish, CeilIndexIgnoresRoundingNoise) {
  EXPECT_EQ(ceil_index(0.7 * 10), 7u);
  EXPECT_EQ(ceil_index(7.0), 7u);
  EXPECT_EQ(ceil_index(7.2), 8u);
  EXPECT_EQ(ceil_index(0.5), 1u);
}

TEST(Qhat, AllFirstLargerIsOne) {
  const std::vector<double> a{5, 6, 7, 8};
  const std::vector<double> b{1, 2, 3, 4};
  for (const auto& p : qhat_series(a, b, full_grid(1, 4)).points) EXPECT_EQ(p.value, 1.0);
}

TEST(Qhat, FullSampleIsOverallFraction) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> a(1000), b(1000);
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(g);
    b[i] = u(g);
    c += a[i] > b[i];
  }
  const std::size_t k[] = {1000};
  EXPECT_DOUBLE_EQ(qhat_series(a, b, k).points[0].value, double(c) / 1000.0);
}

TEST(Qhat, MatchesOracle) {
  std::mt19937_64 g(14);
  for (int rep = 0; rep < 200; ++rep) {
    const auto in = oracle::random_instance(g, 1 + g() % 50);
    const auto s = qhat_series(in.xi, in.eta, full_grid(1, in.xi.size()));
    for (const auto& p : s.points) {
      EXPECT_NEAR(p.value, oracle::qhat(in.xi, in.eta, p.k), 1e-12);
    }
  }
}

TEST(ThresholdedRatios, HiddenDrawsAreRecovered) {
  RngStream rng(7);
  std::vector<Point> pts;
  std::vector<double> thetas;
  for (int i = 0; i < 3000; ++i) {
    const auto d = draw_hidden(2.0, Probability(0.5), law::ShiftedUnitExponential{},
                               law::ShiftedUnitExponential{}, rng);
    pts.push_back(d.point);
    thetas.push_back(d.theta);
  }
  const auto r = thresholded_ratios(pts, 200);
  ASSERT_EQ(r.theta_max.size(), 200u);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_EQ(r.theta_max[i], thetas[r.selected[i]]);
  EXPECT_EQ(r.theta_first.size() + r.theta_second.size(), 200u);
}

TEST(ThresholdedRatios, FullSample) {
  const std::vector<Point> pts{{1, 2}, {6, 3}, {4, 4}, {1, 9}};
  const auto r = thresholded_ratios(pts, 4);
  std::vector<double> sorted = r.theta_max;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<double>{1, 2, 2, 9}));
  EXPECT_EQ(r.theta_first, (std::vector<double>{2}));
  EXPECT_EQ(r.theta_second.size(), 3u);
}

TEST(QQ, ExponentialSlope) {
  RngStream rng(50);
  const auto x = sample_scalar(law::UnitExponential{}, 10000, rng);
  const auto qq = qq_exponential(x);
  double mx = 0, my = 0;
  for (const auto& p : qq) {
    mx += p.theoretical;
    my += p.empirical;
  }
  mx /= qq.size();
  my /= qq.size();
  double sxy = 0, sxx = 0;
  for (const auto& p : qq) {
    sxy += (p.theoretical - mx) * (p.empirical - my);
    sxx += (p.theoretical - mx) * (p.theoretical - mx);
  }
  EXPECT_NEAR(sxy / sxx, 1.0, 0.05);
}

TEST(QQ, SinglePointAndLinearity) {
  const auto one = qq_exponential(std::vector<double>{3.0});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0].theoretical, -std::log(0.5));
  EXPECT_EQ(one[0].empirical, 3.0);
  const std::vector<double> x{0.3, 2.0, 1.1};
  const auto a = qq_exponential(x);
  const auto b = qq_exponential(std::vector<double>{0.6, 4.0, 2.2});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].theoretical, b[i].theoretical);
    EXPECT_EQ(2 * a[i].empirical, b[i].empirical);
  }
  EXPECT_THROW(qq_exponential(std::vector<double>{}), UsageError);
}

TEST(Kde, StandardNormalPeak) {
  std::mt19937_64 g(60);
  std::normal_distribution<double> nd;
  std::vector<double> x(10000);
  for (auto& v : x) v = nd(g);
  const auto d = kde(x);
  EXPECT_NEAR(d.trapezoid_integral(), 1.0, 0.01);
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (std::abs(d.grid[i]) < std::abs(d.grid[i0])) i0 = i;
  }
  EXPECT_NEAR(d.density[i0], 0.399, 0.03);
  EXPECT_NEAR(d.bandwidth, silverman_bandwidth(x), 0.0);
}

TEST(Kde, TwoPointSymmetry) {
  const auto d = kde(std::vector<double>{0.0, 10.0}, 513);
  EXPECT_NEAR(d.trapezoid_integral(), 1.0, 0.01);
  const auto at = [&](double x) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      if (std::abs(d.grid[i] - x) < std::abs(d.grid[best] - x)) best = i;
    }
    return d.density[best];
  };
  EXPECT_NEAR(at(0.0), at(10.0), 1e-9);
  EXPECT_GT(at(0.0), at(5.0));
}

TEST(Kde, Degenerate) {
  EXPECT_THROW(kde(std::vector<double>{1.0}), UsageError);
  EXPECT_THROW(kde(std::vector<double>{2.0, 2.0, 2.0}), DomainError);
}

TEST(AngularDensity, AllOnHorizontalAxis) {
  std::vector<Point> pts;
  for (int i = 1; i <= 50; ++i) pts.push_back({double(i), 0.0});
  const auto d = angular_density(pts, 50);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < d.density.size(); ++i) {
    if (d.density[i] > d.density[imax]) imax = i;
  }
  EXPECT_NEAR(d.grid[imax], 0.0, 0.01);
}

TEST(AngularDensity, AsymptoticIndependenceIsBimodal) {
  RngStream rng(70);
  const auto b = gen_mixture(Probability(0.5), gen::AxesY::pareto(1.0, 0.5),
                             {TailIndex(2.0), {Probability(0.5), law::ShiftedUnitExponential{},
                                               law::ShiftedUnitExponential{}}},
                             10000, rng);
  const auto d = angular_density(b.pairs, 400);
  std::size_t lmode = 0, rmode = 0;
  double mid = 0;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (d.grid[i] < 0.5 && d.density[i] > d.density[lmode]) lmode = i;
    if (d.grid[i] >= 0.5 && (d.grid[rmode] < 0.5 || d.density[i] > d.density[rmode])) rmode = i;
    if (std::abs(d.grid[i] - 0.5) < 0.05) mid = std::max(mid, d.density[i]);
  }
  EXPECT_NEAR(d.grid[lmode], 0.0, 0.1);
  EXPECT_NEAR(d.grid[rmode], 1.0, 0.1);
  EXPECT_LT(mid, 0.5 * std::min(d.density[lmode], d.density[rmode]));
}

TEST(AngularDensity, CommonFactorHasInteriorMode) {
  RngStream rng(71);
  std::vector<Point> pts;
  for (int i = 0; i < 10000; ++i) {
    const double r = sample_one(law::Pareto{TailIndex(1.0)}, rng);
    const double a = sample_one(law::Pareto{TailIndex(3.0)}, rng);
    const double b = sample_one(law::Pareto{TailIndex(3.0)}, rng);
    pts.push_back({r * a, r * b});
  }
  const auto d = angular_density(pts, 500);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < d.density.size(); ++i) {
    if (d.density[i] > d.density[imax]) imax = i;
  }
  EXPECT_NEAR(d.grid[imax], 0.5, 0.1);
}

TEST(Series, Invariants) {
  DiagnosticSeries s{"x", {{2, 1.0}, {5, 2.0}}};
  EXPECT_TRUE(s.satisfies_invariants(5));
  EXPECT_FALSE(s.satisfies_invariants(4));
  EXPECT_EQ(s.at(5), 2.0);
  EXPECT_FALSE(s.at(3));
  DiagnosticSeries bad{"y", {{3, 1.0}, {3, 2.0}}};
  EXPECT_FALSE(bad.satisfies_invariants(10));
}
