#include "hrvlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hrvlab {

namespace {

template <class F>
auto with_context(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw DomainError("detect_report: " + what + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError("detect_report: " + what + ": " + e.what());
  }
}

std::vector<std::size_t> clip(const std::vector<std::size_t>& grid, std::size_t lo,
                              std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t k : grid) {
    if (k >= lo && k <= hi) out.push_back(k);
  }
  return out;
}

std::vector<double> positive_part(std::span<const double> x) {
  std::vector<double> out;
  for (double v : x) {
    if (v > 0.0) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> small_grid(std::size_t m) {
  std::vector<std::size_t> g;
  for (std::size_t k = 2; k + 1 <= m; ++k) g.push_back(k);
  return g;
}

std::string q_tag(double q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

BranchDiagnostics branch(const std::vector<double>& a, const std::vector<double>& theta,
                         const std::vector<std::size_t>& grid, const std::vector<double>& q_list,
                         const std::string& name) {
  BranchDiagnostics b;
  b.size = a.size();
  if (a.empty()) {
    b.hillish_pos.label = "hillish_" + name + "_pos";
    b.hillish_neg.label = "hillish_" + name + "_neg";
    for (double q : q_list) b.pickandsish.push_back({"pickandsish_" + name + "_q" + q_tag(q), {}});
    return b;
  }
  std::vector<double> neg(theta.size());
  std::transform(theta.begin(), theta.end(), neg.begin(), [](double t) { return -t; });
  const ConcomitantTable pos_table(a, theta);
  const ConcomitantTable neg_table(a, neg);
  const auto hgrid = clip(grid, 2, b.size);
  b.hillish_pos = with_context("hillish_" + name + "_pos", [&] {
    return hillish_series(pos_table, hgrid, "hillish_" + name + "_pos");
  });
  b.hillish_neg = with_context("hillish_" + name + "_neg", [&] {
    return hillish_series(neg_table, hgrid, "hillish_" + name + "_neg");
  });
  const auto pgrid = clip(grid, 4, b.size);
  for (double q : q_list) {
    const std::string label = "pickandsish_" + name + "_q" + q_tag(q);
    b.pickandsish.push_back(
        with_context(label, [&] { return pickandsish_series(pos_table, pgrid, q, label); }));
  }
  return b;
}

}  // namespace

const char* to_string(RankMode m) {
  switch (m) {
    case RankMode::Literal: return "literal";
    case RankMode::Pareto: return "pareto";
    case RankMode::None: return "none";
  }
  return "?";
}

RankMode rank_mode_from_string(const std::string& s) {
  if (s == "literal") return RankMode::Literal;
  if (s == "pareto" || s == "pareto-standardized") return RankMode::Pareto;
  if (s == "none" || s == "raw") return RankMode::None;
  throw ConfigError("unknown rank mode '" + s + "' (expected literal, pareto or none)");
}

std::vector<std::size_t> KGrid::resolve(std::size_t n) const {
  const std::size_t hi = max != 0 ? max : n / 10;
  const std::size_t st = step != 0 ? step : std::max<std::size_t>(1, n / 1000);
  std::vector<std::size_t> out;
  for (std::size_t k = std::max<std::size_t>(min, 1); k <= hi; k += st) out.push_back(k);
  return out;
}

std::vector<Point> transform_pairs(std::span<const Point> pairs, RankMode mode) {
  if (mode == RankMode::None) return {pairs.begin(), pairs.end()};
  std::vector<double> x1(pairs.size()), x2(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    x1[i] = pairs[i].z1;
    x2[i] = pairs[i].z2;
  }
  const auto r1 = rank_transform(x1);
  const auto r2 = rank_transform(x2);
  std::vector<Point> out(pairs.size());
  if (mode == RankMode::Literal) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = {static_cast<double>(r1[i]), static_cast<double>(r2[i])};
    }
  } else {
    const auto p1 = pareto_standardize(r1);
    const auto p2 = pareto_standardize(r2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {p1[i], p2[i]};
  }
  return out;
}

DetectionReport detect_report(std::span<const Point> pairs, const DetectConfig& config,
                              const std::string& provenance) {
  const std::size_t n = pairs.size();
  DetectionReport r;
  r.meta.n = n;
  r.meta.provenance = provenance;
  r.meta.rank_mode = config.rank_mode;
  r.meta.q_list = config.q_list;
  r.meta.thresholds = config.thresholds;
  r.meta.k_grid = config.k_grid.resolve(n);
  const auto& grid = r.meta.k_grid;

  for (const Point& p : pairs) {
    if (!(p.z1 >= 0.0 && p.z2 >= 0.0)) {
      throw DomainError("detect_report: coordinates must be nonnegative");
    }
  }
  std::size_t max_k = grid.empty() ? 0 : grid.back();
  for (std::size_t t : config.thresholds) max_k = std::max(max_k, t);
  r.meta.angular_k = config.angular_k != 0
                         ? config.angular_k
                         : (config.thresholds.empty()
                                ? std::min<std::size_t>(n, 400)
                                : *std::max_element(config.thresholds.begin(),
                                                    config.thresholds.end()));
  max_k = std::max(max_k, r.meta.angular_k);
  if (n < max_k || n < 2) {
    throw UsageError("detect_report: n=" + std::to_string(n) +
                     " is smaller than the largest configured k=" + std::to_string(max_k));
  }
  for (double q : config.q_list) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("detect_report: q values must lie in (0,1)");
  }

  std::vector<double> raw1(n), raw2(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw1[i] = pairs[i].z1;
    raw2[i] = pairs[i].z2;
  }
  // Zeros (points on the axes) sit below every order statistic the grid uses.
  auto hill_positive = [&](std::span<const double> x, const std::string& label) {
    const auto pos = positive_part(x);
    const auto g = clip(grid, 2, pos.empty() ? 0 : pos.size() - 1);
    return with_context(label, [&] { return hill_series(pos, g, label); });
  };
  r.marginal_hill_1 = hill_positive(raw1, "marginal_hill_1");
  r.marginal_hill_2 = hill_positive(raw2, "marginal_hill_2");

  const auto t = transform_pairs(pairs, config.rank_mode);
  std::vector<double> t1(n), t2(n), mins(n);
  for (std::size_t i = 0; i < n; ++i) {
    t1[i] = t[i].z1;
    t2[i] = t[i].z2;
    mins[i] = std::min(t1[i], t2[i]);
  }
  r.min_hill = hill_positive(mins, "min_hill");

  std::vector<double> a1, th1, a2, th2;
  for (const Point& p : t) {
    if (!(p.z1 > 0.0 && p.z2 > 0.0)) continue;
    if (p.z1 > p.z2) {
      a1.push_back(p.z2);
      th1.push_back(p.z1 / p.z2);
    } else {
      a2.push_back(p.z1);
      th2.push_back(p.z2 / p.z1);
    }
  }
  r.first = branch(a1, th1, grid, config.q_list, "first");
  r.second = branch(a2, th2, grid, config.q_list, "second");

  r.qhat = with_context("qhat", [&] { return qhat_series(t1, t2, clip(grid, 2, n), "qhat"); });

  for (std::size_t thr : config.thresholds) {
    ThresholdDiagnostics td;
    td.threshold = thr;
    const std::string tag = "_t" + std::to_string(thr);
    td.ratios = with_context("thresholded_ratios" + tag, [&] { return thresholded_ratios(t, thr); });
    auto ratio_hill = [&](const std::vector<double>& x, const std::string& label) {
      return with_context(label, [&] { return hill_series(x, small_grid(x.size()), label); });
    };
    td.ratio_tail_hill_1 = ratio_hill(td.ratios.theta_first, "ratio_tail_hill_1" + tag);
    td.ratio_tail_hill_2 = ratio_hill(td.ratios.theta_second, "ratio_tail_hill_2" + tag);
    td.ratio_tail_hill_max = ratio_hill(td.ratios.theta_max, "ratio_tail_hill_max" + tag);

    auto logs = [](const std::vector<double>& x) {
      std::vector<double> out(x.size());
      std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::log(v); });
      return out;
    };
    if (!td.ratios.theta_max.empty()) td.qq_theta_max = qq_exponential(td.ratios.theta_max);
    if (!td.ratios.theta_first.empty()) {
      td.qq_log_theta_1 = qq_exponential(logs(td.ratios.theta_first));
    } else {
      r.meta.skipped.push_back("qq_log_theta_1" + tag + ": empty branch");
    }
    if (!td.ratios.theta_second.empty()) {
      td.qq_log_theta_2 = qq_exponential(logs(td.ratios.theta_second));
    } else {
      r.meta.skipped.push_back("qq_log_theta_2" + tag + ": empty branch");
    }

    auto density = [&](const std::vector<double>& x,
                       const std::string& label) -> std::optional<DensityEstimate> {
      try {
        return kde(x, config.grid_size);
      } catch (const Error& e) {
        r.meta.skipped.push_back(label + ": " + e.what());
        return std::nullopt;
      }
    };
    td.ratio_kde_1 = density(td.ratios.theta_first, "ratio_kde_1" + tag);
    td.ratio_kde_2 = density(td.ratios.theta_second, "ratio_kde_2" + tag);
    r.thresholds.push_back(std::move(td));
  }

  r.angular_density = with_context("angular_density", [&] {
    return angular_density(t, r.meta.angular_k, config.grid_size);
  });
  return r;
}

}  // namespace hrvlab
