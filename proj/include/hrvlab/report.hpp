#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrvlab/diagnostics.hpp"

namespace hrvlab {

/// Marginal transform applied before the CEV diagnostics.
enum class RankMode {
  Literal,  // D* = #{j : D_i >= D_j}
  Pareto,   // n / (n + 1 - D*)
  None,     // raw coordinates
};

const char* to_string(RankMode m);
RankMode rank_mode_from_string(const std::string& s);

/// Grid of k values; zero fields resolve from n: max = n/10, step = max(1, n/1000).
struct KGrid {
  std::size_t min = 10;
  std::size_t max = 0;
  std::size_t step = 0;

  std::vector<std::size_t> resolve(std::size_t n) const;
};

struct DetectConfig {
  KGrid k_grid;
  std::vector<double> q_list{0.8};
  std::vector<std::size_t> thresholds{100, 400};
  RankMode rank_mode = RankMode::Literal;
  /// Points used by the angular density; 0 means the largest threshold.
  std::size_t angular_k = 0;
  std::size_t grid_size = 512;
};

/// Statistics of one GPOLAR branch: (A, theta_1) where the first coordinate
/// is larger, (A, theta_2) otherwise.
struct BranchDiagnostics {
  std::size_t size = 0;
  DiagnosticSeries hillish_pos;
  DiagnosticSeries hillish_neg;
  std::vector<DiagnosticSeries> pickandsish;  // one per q in q_list
};

struct ThresholdDiagnostics {
  std::size_t threshold = 0;
  ThresholdedRatios ratios;
  DiagnosticSeries ratio_tail_hill_1;
  DiagnosticSeries ratio_tail_hill_2;
  DiagnosticSeries ratio_tail_hill_max;
  std::vector<QQPoint> qq_theta_max;
  std::vector<QQPoint> qq_log_theta_1;
  std::vector<QQPoint> qq_log_theta_2;
  std::optional<DensityEstimate> ratio_kde_1;
  std::optional<DensityEstimate> ratio_kde_2;
};

struct ReportMeta {
  std::size_t n = 0;
  std::string provenance;
  RankMode rank_mode = RankMode::Literal;
  std::vector<std::size_t> k_grid;
  std::vector<double> q_list;
  std::vector<std::size_t> thresholds;
  std::size_t angular_k = 0;
  std::vector<std::string> skipped;
};

struct DetectionReport {
  DiagnosticSeries marginal_hill_1;
  DiagnosticSeries marginal_hill_2;
  DiagnosticSeries min_hill;
  BranchDiagnostics first;
  BranchDiagnostics second;
  DiagnosticSeries qhat;
  std::vector<ThresholdDiagnostics> thresholds;
  DensityEstimate angular_density;
  ReportMeta meta;
};

/// Coordinates after the configured marginal transform.
std::vector<Point> transform_pairs(std::span<const Point> pairs, RankMode mode);

/// Runs every diagnostic on one sample. Pure in (pairs, config, provenance).
/// Component errors are rethrown with the failing statistic named.
DetectionReport detect_report(std::span<const Point> pairs, const DetectConfig& config,
                              const std::string& provenance = "");

}  // namespace hrvlab
