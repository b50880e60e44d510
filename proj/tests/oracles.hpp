#pragma once

// Direct from-definition recomputations used as test oracles. Everything here
// is quadratic or worse and deliberately avoids the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "hrvlab/generators.hpp"

namespace oracle {

inline double hill(std::vector<double> x, std::size_t k) {
  std::sort(x.begin(), x.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(x[i]) - std::log(x[k]);
  return static_cast<double>(k) / s;
}

// Indices sorted by xi descending; earlier index wins ties.
inline std::vector<std::size_t> desc_order(const std::vector<double>& xi) {
  std::vector<std::size_t> idx(xi.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const bool swap = xi[idx[b]] > xi[idx[a]] || (xi[idx[b]] == xi[idx[a]] && idx[b] < idx[a]);
      if (swap) std::swap(idx[a], idx[b]);
    }
  }
  return idx;
}

inline std::vector<double> eta_star(const std::vector<double>& xi, const std::vector<double>& eta) {
  std::vector<double> out;
  for (std::size_t i : desc_order(xi)) out.push_back(eta[i]);
  return out;
}

inline double hillish(const std::vector<double>& xi, const std::vector<double>& eta, std::size_t k) {
  const auto es = eta_star(xi, eta);
  double s = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    std::size_t n_j = 0;
    for (std::size_t l = 1; l <= k; ++l) n_j += es[l - 1] <= es[j - 1] ? 1 : 0;
    s += std::log(double(k) / double(j)) * std::log(double(k) / double(n_j));
  }
  return s / double(k);
}

// a-th smallest of the first b concomitants.
inline double order_stat(const std::vector<double>& es, std::size_t a, std::size_t b) {
  std::vector<double> head(es.begin(), es.begin() + static_cast<std::ptrdiff_t>(b));
  std::sort(head.begin(), head.end());
  return head[a - 1];
}

// q = tenths / 10; indices use exact integer ceilings.
inline std::optional<double> pickandsish(const std::vector<double>& xi,
                                         const std::vector<double>& eta, std::size_t k,
                                         unsigned tenths) {
  const auto es = eta_star(xi, eta);
  const std::size_t qk = (tenths * k + 9) / 10;
  const std::size_t qk2 = (tenths * k + 19) / 20;
  const std::size_t k2 = (k + 1) / 2;
  const double top = order_stat(es, qk, k);
  const double num = top - order_stat(es, qk2, k2);
  const double den = top - order_stat(es, qk2, k);
  if (den == 0.0) return std::nullopt;
  return num / den;
}

inline double qhat(const std::vector<double>& first, const std::vector<double>& second,
                   std::size_t k) {
  std::vector<double> mins(first.size());
  for (std::size_t i = 0; i < mins.size(); ++i) mins[i] = std::min(first[i], second[i]);
  const auto idx = desc_order(mins);
  std::size_t c = 0;
  for (std::size_t i = 0; i < k; ++i) c += first[idx[i]] > second[idx[i]] ? 1 : 0;
  return double(c) / double(k);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// Random instance with occasional ties, for oracle comparisons.
struct Instance {
  std::vector<double> xi, eta;
};

inline Instance random_instance(std::mt19937_64& g, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool ties = u(g) < 0.3;
  Instance in;
  for (std::size_t i = 0; i < n; ++i) {
    if (ties) {
      in.xi.push_back(1.0 + std::floor(u(g) * 6.0));
      in.eta.push_back(1.0 + std::floor(u(g) * 6.0));
    } else {
      in.xi.push_back(std::pow(1.0 - u(g), -1.0 / 1.5));
      in.eta.push_back(std::pow(1.0 - u(g), -1.0));
    }
  }
  return in;
}

}  // namespace oracle
