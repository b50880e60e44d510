#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrvlab/generators.hpp"

namespace hrvlab {

/// Polar coordinates relative to the origin with the L1 norm.
struct PolarPointOrigin {
  double radius;
  double angle_w;  // z1 / (z1 + z2)
};

enum class Larger { First, Second, Tie };

/// Polar coordinates relative to the axes: distance min(z1, z2) and the
/// point on {min = 1}, encoded by its free coordinate theta >= 1.
struct PolarPointAxes {
  double radius;
  double theta;
  Larger which_larger;
};

/// Throws DomainError for (0, 0) or negative coordinates.
PolarPointOrigin gpolar_origin(Point z);
Point reconstruct(const PolarPointOrigin& p);

/// Throws DomainError unless both coordinates are > 0.
PolarPointAxes gpolar_axes(Point z);
Point reconstruct(const PolarPointAxes& p);

/// out[i] = #{j : x[i] >= x[j]}. Tied values share the largest count.
std::vector<std::size_t> rank_transform(std::span<const double> x);

/// n / (n + 1 - r) for ascending literal ranks r in 1..n; values in [1, n].
std::vector<double> pareto_standardize(std::span<const std::size_t> ranks);

/// Descending order statistics of xi with their eta concomitants.
///
/// Ties in xi are broken by original index: the earlier observation ranks as
/// the larger one. Indices j, k below are 1-based as in the usual notation.
class ConcomitantTable {
 public:
  ConcomitantTable(std::span<const double> xi, std::span<const double> eta);

  std::size_t size() const noexcept { return xi_desc_.size(); }
  const std::vector<double>& xi_desc() const noexcept { return xi_desc_; }
  const std::vector<double>& eta_star() const noexcept { return eta_star_; }
  /// Original index of the i-th largest xi (0-based in, 0-based out).
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  /// N_j^k = #{l <= k : eta*_l <= eta*_j}, for 1 <= j <= k <= n.
  std::size_t rank(std::size_t j, std::size_t k) const;

  /// N_1^k, ..., N_k^k in O(k log k).
  std::vector<std::size_t> ranks(std::size_t k) const;

  /// a-th smallest of eta*_1..eta*_b, for 1 <= a <= b <= n.
  double order_stat(std::size_t a, std::size_t b) const;

 private:
  std::vector<std::size_t> order_;
  std::vector<double> xi_desc_;
  std::vector<double> eta_star_;
};

/// Indices of the k largest values, descending, ties by lower index first.
std::vector<std::size_t> top_k_indices(std::span<const double> key, std::size_t k);

}  // namespace hrvlab
