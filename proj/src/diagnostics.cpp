#include "hrvlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numbers>
#include <numeric>

namespace hrvlab {

namespace {

void require_increasing(std::span<const std::size_t> k_grid, const char* who) {
  for (std::size_t i = 1; i < k_grid.size(); ++i) {
    if (k_grid[i] <= k_grid[i - 1]) {
      throw UsageError(std::string(who) + ": k grid must be strictly increasing");
    }
  }
}

void require_same_length(std::size_t a, std::size_t b, const char* who) {
  if (a != b) {
    throw UsageError(std::string(who) + ": inputs differ in length (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

// Descending top-(m) values, all of x validated positive.
std::vector<double> descending_top(std::span<const double> x, std::size_t m) {
  for (double v : x) {
    if (!(v > 0.0)) throw DomainError("hill: data must be > 0, got " + std::to_string(v));
  }
  std::vector<double> top(m);
  std::partial_sort_copy(x.begin(), x.end(), top.begin(), top.end(), std::greater<>());
  return top;
}

double hill_from_sorted(const std::vector<double>& desc, const std::vector<double>& log_prefix,
                        std::size_t k) {
  if (desc[0] == desc[k]) return std::numeric_limits<double>::infinity();
  const double mean_excess = log_prefix[k] / static_cast<double>(k) - std::log(desc[k]);
  return 1.0 / mean_excess;
}

double sample_sd(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

bool DiagnosticSeries::satisfies_invariants(std::size_t n) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].k < 2 || points[i].k > n) return false;
    if (i > 0 && points[i].k <= points[i - 1].k) return false;
  }
  return true;
}

std::optional<double> DiagnosticSeries::at(std::size_t k) const {
  auto it = std::lower_bound(points.begin(), points.end(), k,
                             [](const SeriesPoint& p, std::size_t kk) { return p.k < kk; });
  if (it == points.end() || it->k != k) return std::nullopt;
  return it->value;
}

double DensityEstimate::trapezoid_integral() const {
  double s = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    s += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return s;
}

double hill_alpha(std::span<const double> x, std::size_t k) {
  const std::size_t grid[] = {k};
  return hill_series(x, grid).points.front().value;
}

DiagnosticSeries hill_series(std::span<const double> x, std::span<const std::size_t> k_grid,
                             std::string label) {
  require_increasing(k_grid, "hill");
  DiagnosticSeries s{std::move(label), {}};
  if (k_grid.empty()) return s;
  const std::size_t n = x.size();
  if (k_grid.front() < 1) throw UsageError("hill: k must be >= 1");
  if (k_grid.back() >= n) {
    throw UsageError("hill: k=" + std::to_string(k_grid.back()) + " must be < n=" +
                     std::to_string(n));
  }
  const auto desc = descending_top(x, k_grid.back() + 1);
  std::vector<double> prefix(desc.size() + 1, 0.0);
  for (std::size_t i = 0; i < desc.size(); ++i) prefix[i + 1] = prefix[i] + std::log(desc[i]);
  s.points.reserve(k_grid.size());
  for (std::size_t k : k_grid) s.points.push_back({k, hill_from_sorted(desc, prefix, k)});
  return s;
}

double hillish(const ConcomitantTable& table, std::size_t k) {
  if (k < 2 || k > table.size()) {
    throw UsageError("hillish: need 2 <= k <= n, got k=" + std::to_string(k) + " n=" +
                     std::to_string(table.size()));
  }
  const auto ranks = table.ranks(k);
  const double kd = static_cast<double>(k);
  double sum = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    sum += std::log(kd / static_cast<double>(j)) *
           std::log(kd / static_cast<double>(ranks[j - 1]));
  }
  return sum / kd;
}

double hillish(std::span<const double> xi, std::span<const double> eta, std::size_t k) {
  require_same_length(xi.size(), eta.size(), "hillish");
  return hillish(ConcomitantTable(xi, eta), k);
}

DiagnosticSeries hillish_series(const ConcomitantTable& table, std::span<const std::size_t> k_grid,
                                std::string label) {
  require_increasing(k_grid, "hillish");
  DiagnosticSeries s{std::move(label), {}};
  s.points.reserve(k_grid.size());
  for (std::size_t k : k_grid) s.points.push_back({k, hillish(table, k)});
  return s;
}

std::size_t ceil_index(double x) {
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

double pickandsish(const ConcomitantTable& table, std::size_t k, double q) {
  if (!(q > 0.0 && q < 1.0)) throw UsageError("pickandsish: q must lie in (0,1)");
  if (k < 4 || k > table.size()) {
    throw UsageError("pickandsish: need 4 <= k <= n, got k=" + std::to_string(k) + " n=" +
                     std::to_string(table.size()));
  }
  const double kd = static_cast<double>(k);
  const std::size_t a_full = ceil_index(q * kd);
  const std::size_t a_half = ceil_index(q * kd / 2.0);
  const std::size_t half = ceil_index(kd / 2.0);
  const double top = table.order_stat(a_full, k);
  const double num = top - table.order_stat(a_half, half);
  const double den = top - table.order_stat(a_half, k);
  if (den == 0.0) {
    throw DomainError("pickandsish: degenerate quantiles (zero denominator) at k=" +
                      std::to_string(k) + " q=" + std::to_string(q));
  }
  return num / den;
}

double pickandsish(std::span<const double> xi, std::span<const double> eta, std::size_t k,
                   double q) {
  require_same_length(xi.size(), eta.size(), "pickandsish");
  return pickandsish(ConcomitantTable(xi, eta), k, q);
}

DiagnosticSeries pickandsish_series(const ConcomitantTable& table,
                                    std::span<const std::size_t> k_grid, double q,
                                    std::string label) {
  require_increasing(k_grid, "pickandsish");
  DiagnosticSeries s{std::move(label), {}};
  s.points.reserve(k_grid.size());
  for (std::size_t k : k_grid) s.points.push_back({k, pickandsish(table, k, q)});
  return s;
}

DiagnosticSeries qhat_series(std::span<const double> first, std::span<const double> second,
                             std::span<const std::size_t> k_grid, std::string label) {
  require_same_length(first.size(), second.size(), "qhat");
  require_increasing(k_grid, "qhat");
  DiagnosticSeries s{std::move(label), {}};
  if (k_grid.empty()) return s;
  if (k_grid.front() < 1 || k_grid.back() > first.size()) {
    throw UsageError("qhat: need 1 <= k <= n");
  }
  std::vector<double> a(first.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::min(first[i], second[i]);
  const auto order = top_k_indices(a, k_grid.back());
  std::size_t hits = 0;
  std::size_t taken = 0;
  for (std::size_t k : k_grid) {
    for (; taken < k; ++taken) {
      const std::size_t i = order[taken];
      if (first[i] > second[i]) ++hits;
    }
    s.points.push_back({k, static_cast<double>(hits) / static_cast<double>(k)});
  }
  return s;
}

ThresholdedRatios thresholded_ratios(std::span<const Point> pairs, std::size_t k) {
  if (k > pairs.size()) {
    throw UsageError("thresholded_ratios: k=" + std::to_string(k) + " exceeds n=" +
                     std::to_string(pairs.size()));
  }
  std::vector<double> a(pairs.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::min(pairs[i].z1, pairs[i].z2);
  ThresholdedRatios out;
  out.selected = top_k_indices(a, k);
  for (std::size_t i : out.selected) {
    const auto polar = gpolar_axes(pairs[i]);
    if (polar.which_larger == Larger::First) {
      out.theta_first.push_back(polar.theta);
    } else {
      out.theta_second.push_back(polar.theta);
    }
    out.theta_max.push_back(polar.theta);
  }
  return out;
}

std::vector<QQPoint> qq_exponential(std::span<const double> x) {
  if (x.empty()) throw UsageError("qq_exponential: empty input");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double m1 = static_cast<double>(sorted.size()) + 1.0;
  std::vector<QQPoint> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out[i] = {-std::log1p(-static_cast<double>(i + 1) / m1), sorted[i]};
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> x) {
  if (x.size() < 2) throw UsageError("kde: need at least 2 observations");
  const double sd = sample_sd(x);
  if (!(sd > 0.0)) throw DomainError("kde: degenerate data (zero variance)");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

DensityEstimate kde(std::span<const double> x, std::size_t grid_size,
                    std::optional<double> bandwidth) {
  if (x.size() < 2) throw UsageError("kde: need at least 2 observations");
  if (grid_size < 2) throw UsageError("kde: grid_size must be >= 2");
  double h = 0.0;
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw UsageError("kde: bandwidth must be > 0");
    h = *bandwidth;
  } else {
    h = silverman_bandwidth(x);
  }
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = *mn - 3.0 * h;
  const double hi = *mx + 3.0 * h;
  DensityEstimate d;
  d.bandwidth = h;
  d.grid.resize(grid_size);
  d.density.resize(grid_size);
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  const double norm = 1.0 / (static_cast<double>(x.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double at = lo + step * static_cast<double>(g);
    double s = 0.0;
    for (double v : x) {
      const double u = (at - v) / h;
      s += std::exp(-0.5 * u * u);
    }
    d.grid[g] = at;
    d.density[g] = s * norm;
  }
  return d;
}

DensityEstimate angular_density(std::span<const Point> pairs, std::size_t k,
                                std::size_t grid_size) {
  if (k > pairs.size()) throw UsageError("angular_density: k exceeds n");
  std::vector<double> norm(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) norm[i] = pairs[i].z1 + pairs[i].z2;
  std::vector<double> angles;
  angles.reserve(k);
  for (std::size_t i : top_k_indices(norm, k)) {
    const Point p = pairs[i];
    if (p.z1 < 0.0 || p.z2 < 0.0 || (p.z1 == 0.0 && p.z2 == 0.0)) {
      throw DomainError("angular_density: points must be nonnegative and not both zero");
    }
    angles.push_back(2.0 / std::numbers::pi * std::atan2(p.z2, p.z1));
  }
  const bool constant =
      !angles.empty() && std::all_of(angles.begin(), angles.end(),
                                     [&](double a) { return a == angles.front(); });
  // A single angle has no spread for Silverman's rule; smooth on a fixed scale.
  if (constant) return kde(angles, grid_size, 0.02);
  return kde(angles, grid_size);
}

}  // namespace hrvlab
