#include "hrvlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hrvlab {

namespace {

std::vector<std::size_t> descending_order(std::span<const double> key) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return idx;
}

// A reconstructed coordinate can land several ulps away from an integer
// input. When an integer within `tol` maps forward to the same polar value,
// it is returned instead.
template <class Check>
double snap_integer(double c, double tol, Check&& maps_back) {
  const double n = std::nearbyint(c);
  if (n == c || !std::isfinite(c)) return c;
  if (std::abs(c - n) <= tol && maps_back(n)) return n;
  return c;
}

double ulp(double x) {
  x = std::abs(x);
  return std::nextafter(x, INFINITY) - x;
}

}  // namespace

PolarPointOrigin gpolar_origin(Point z) {
  if (!(z.z1 >= 0.0 && z.z2 >= 0.0)) throw DomainError("gpolar_origin: negative coordinate");
  const double r = z.z1 + z.z2;
  if (r == 0.0) throw DomainError("gpolar_origin: undefined at the origin");
  return {r, z.z1 / r};
}

Point reconstruct(const PolarPointOrigin& p) {
  const double r = p.radius;
  const double w = p.angle_w;
  const double tol = 4.0 * ulp(r);
  auto exact = [&](double a, double b) { return a + b == r && a / (a + b) == w; };
  Point c;
  // The smaller coordinate comes from the product, the larger by subtraction.
  if (w <= 0.5) {
    c.z1 = snap_integer(r * w, tol, [&](double n) { return n / r == w; });
    c.z2 = r - c.z1;
  } else {
    c.z2 = snap_integer(r * (1.0 - w), tol, [&](double m) { return exact(r - m, m); });
    c.z1 = r - c.z2;
  }
  if (exact(c.z1, c.z2)) return c;

  // Several floating-point pairs share one (r, w); pick the nearest of them.
  auto step = [](double x, int k) {
    for (; k > 0; --k) x = std::nextafter(x, INFINITY);
    for (; k < 0; ++k) x = std::nextafter(x, 0.0);
    return x;
  };
  Point best = c;
  int cost = std::numeric_limits<int>::max();
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      const double a = step(c.z1, i);
      const double b = step(c.z2, j);
      if (std::abs(i) + std::abs(j) < cost && exact(a, b)) {
        cost = std::abs(i) + std::abs(j);
        best = {a, b};
      }
    }
  }
  return best;
}

PolarPointAxes gpolar_axes(Point z) {
  if (!(z.z1 > 0.0 && z.z2 > 0.0)) {
    throw DomainError("gpolar_axes: both coordinates must be > 0, got (" + std::to_string(z.z1) +
                      ", " + std::to_string(z.z2) + ")");
  }
  if (z.z1 > z.z2) return {z.z2, z.z1 / z.z2, Larger::First};
  if (z.z2 > z.z1) return {z.z1, z.z2 / z.z1, Larger::Second};
  return {z.z1, 1.0, Larger::Tie};
}

Point reconstruct(const PolarPointAxes& p) {
  auto hi = [&] {
    const double c = p.radius * p.theta;
    return snap_integer(c, 2.0 * ulp(c), [&](double n) { return n / p.radius == p.theta; });
  };
  switch (p.which_larger) {
    case Larger::First: return {hi(), p.radius};
    case Larger::Second: return {p.radius, hi()};
    case Larger::Tie: break;
  }
  return {p.radius, p.radius};
}

std::vector<std::size_t> rank_transform(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x[i]) -
                                      sorted.begin());
  }
  return out;
}

std::vector<double> pareto_standardize(std::span<const std::size_t> ranks) {
  const double n = static_cast<double>(ranks.size());
  std::vector<double> out(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    out[i] = n / (n + 1.0 - static_cast<double>(ranks[i]));
  }
  return out;
}

std::vector<std::size_t> top_k_indices(std::span<const double> key, std::size_t k) {
  if (k > key.size()) {
    throw UsageError("top_k_indices: k=" + std::to_string(k) + " exceeds n=" +
                     std::to_string(key.size()));
  }
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) {
    return key[a] > key[b] || (key[a] == key[b] && a < b);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
  idx.resize(k);
  return idx;
}

ConcomitantTable::ConcomitantTable(std::span<const double> xi, std::span<const double> eta) {
  if (xi.size() != eta.size()) {
    throw UsageError("concomitant_table: xi has " + std::to_string(xi.size()) +
                     " values but eta has " + std::to_string(eta.size()));
  }
  if (xi.empty()) throw UsageError("concomitant_table: empty input");
  order_ = descending_order(xi);
  xi_desc_.reserve(xi.size());
  eta_star_.reserve(xi.size());
  for (std::size_t i : order_) {
    xi_desc_.push_back(xi[i]);
    eta_star_.push_back(eta[i]);
  }
}

std::size_t ConcomitantTable::rank(std::size_t j, std::size_t k) const {
  if (j < 1 || j > k || k > size()) throw UsageError("concomitant rank: need 1 <= j <= k <= n");
  const double v = eta_star_[j - 1];
  return static_cast<std::size_t>(std::count_if(eta_star_.begin(),
                                                eta_star_.begin() + static_cast<std::ptrdiff_t>(k),
                                                [v](double e) { return e <= v; }));
}

std::vector<std::size_t> ConcomitantTable::ranks(std::size_t k) const {
  if (k < 1 || k > size()) throw UsageError("concomitant ranks: need 1 <= k <= n");
  std::vector<double> top(eta_star_.begin(), eta_star_.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(top.begin(), top.end());
  std::vector<std::size_t> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = static_cast<std::size_t>(std::upper_bound(top.begin(), top.end(), eta_star_[j]) -
                                      top.begin());
  }
  return out;
}

double ConcomitantTable::order_stat(std::size_t a, std::size_t b) const {
  if (a < 1 || a > b || b > size()) {
    throw UsageError("concomitant order statistic: need 1 <= a <= b <= n, got a=" +
                     std::to_string(a) + " b=" + std::to_string(b));
  }
  std::vector<double> top(eta_star_.begin(), eta_star_.begin() + static_cast<std::ptrdiff_t>(b));
  auto nth = top.begin() + static_cast<std::ptrdiff_t>(a - 1);
  std::nth_element(top.begin(), nth, top.end());
  return *nth;
}

}  // namespace hrvlab
