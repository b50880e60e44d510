#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hrvlab/transforms.hpp"

namespace hrvlab {

struct SeriesPoint {
  std::size_t k;
  double value;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// (k, value) pairs of a statistic traced over the number of order statistics.
struct DiagnosticSeries {
  std::string label;
  std::vector<SeriesPoint> points;

  /// k strictly increasing and 2 <= k <= n.
  bool satisfies_invariants(std::size_t n) const;
  /// Value at exactly k, if present.
  std::optional<double> at(std::size_t k) const;
  friend bool operator==(const DiagnosticSeries&, const DiagnosticSeries&) = default;
};

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;

  double trapezoid_integral() const;
  friend bool operator==(const DensityEstimate&, const DensityEstimate&) = default;
};

/// Tail-index estimate 1/H_{k,n}, H_{k,n} = (1/k) sum_{i<=k} log(x_(i) / x_(k+1)).
/// Requires every x > 0 and 1 <= k < n.
double hill_alpha(std::span<const double> x, std::size_t k);

/// Hill tail-index estimates over a strictly increasing k grid.
DiagnosticSeries hill_series(std::span<const double> x, std::span<const std::size_t> k_grid,
                             std::string label = "hill");

/// (1/k) sum_j log(k/j) log(k/N_j^k). Requires 2 <= k <= n.
double hillish(const ConcomitantTable& table, std::size_t k);
double hillish(std::span<const double> xi, std::span<const double> eta, std::size_t k);
DiagnosticSeries hillish_series(const ConcomitantTable& table, std::span<const std::size_t> k_grid,
                                std::string label = "hillish");

/// (eta*_{qk:k} - eta*_{qk/2:k/2}) / (eta*_{qk:k} - eta*_{qk/2:k}) with
/// eta*_{s:t} := eta*_{ceil(s):ceil(t)}. Requires 4 <= k <= n and 0 < q < 1;
/// a zero denominator raises DomainError.
double pickandsish(const ConcomitantTable& table, std::size_t k, double q);
double pickandsish(std::span<const double> xi, std::span<const double> eta, std::size_t k,
                   double q);
DiagnosticSeries pickandsish_series(const ConcomitantTable& table,
                                    std::span<const std::size_t> k_grid, double q,
                                    std::string label = "pickandsish");

/// ceil(x) that ignores representation error of a few ulps above an integer.
std::size_t ceil_index(double x);

/// Fraction of the top-k points by min(first, second) with first > second.
DiagnosticSeries qhat_series(std::span<const double> first, std::span<const double> second,
                             std::span<const std::size_t> k_grid, std::string label = "qhat");

struct ThresholdedRatios {
  std::vector<double> theta_first;   // z1/z2 where z1 > z2
  std::vector<double> theta_second;  // z2/z1 where z1 <= z2
  std::vector<double> theta_max;     // max ratio, all k points, in selection order
  std::vector<std::size_t> selected;
};

/// Ratios over the k points with largest min(z1, z2).
ThresholdedRatios thresholded_ratios(std::span<const Point> pairs, std::size_t k);

struct QQPoint {
  double theoretical;
  double empirical;
  friend bool operator==(const QQPoint&, const QQPoint&) = default;
};

/// Sorted data against standard exponential quantiles -log(1 - i/(m+1)).
std::vector<QQPoint> qq_exponential(std::span<const double> x);

/// Gaussian KDE on grid_size points spanning [min - 3h, max + 3h]. Default
/// bandwidth is Silverman's 0.9 min(sd, IQR/1.34) n^(-1/5).
DensityEstimate kde(std::span<const double> x, std::size_t grid_size = 512,
                    std::optional<double> bandwidth = std::nullopt);

double silverman_bandwidth(std::span<const double> x);

/// KDE of (2/pi) atan2(z2, z1) over the k points with largest L1 norm.
DensityEstimate angular_density(std::span<const Point> pairs, std::size_t k,
                                std::size_t grid_size = 512);

/// Linear-interpolation sample quantile (type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

}  // namespace hrvlab
