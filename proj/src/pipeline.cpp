#include "hrvlab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "hrvlab/io.hpp"
#include "hrvlab/spec_json.hpp"
#include "hrvlab/version.hpp"

namespace hrvlab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t get_size(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw ConfigError(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::uint64_t get_u64(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw ConfigError(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

Command command_from_string(const std::string& s) {
  if (s == "generate") return Command::Generate;
  if (s == "detect") return Command::Detect;
  if (s == "experiment") return Command::Experiment;
  throw UsageError("unknown command '" + s + "' (expected generate, detect or experiment)");
}

const std::set<std::string>& allowed_keys(Command c) {
  static const std::set<std::string> gen{"command", "generator", "experiment", "n",
                                         "seed",    "partitions", "threads",   "output"};
  static const std::set<std::string> det{"command", "input_csv", "output", "detect"};
  static const std::set<std::string> exp{"command", "experiment", "replications", "seed",
                                         "n",       "threads",    "output"};
  switch (c) {
    case Command::Generate: return gen;
    case Command::Detect: return det;
    case Command::Experiment: return exp;
  }
  return gen;
}

std::vector<double> positive_part(std::span<const double> x) {
  std::vector<double> out;
  for (double v : x) {
    if (v > 0.0) out.push_back(v);
  }
  return out;
}

template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return kNaN;
  }
}

double hill_capped(std::span<const double> x, std::size_t k) {
  if (x.size() < 3) return kNaN;
  return hill_alpha(x, std::min(k, x.size() - 1));
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Generate: return "generate";
    case Command::Detect: return "detect";
    case Command::Experiment: return "experiment";
  }
  return "?";
}

void validate(const RunConfig& c) {
  auto forbid = [&](bool present, const char* field) {
    if (present) {
      throw UsageError(std::string("'") + field + "' is not used by the " + to_string(c.command) +
                       " command");
    }
  };
  switch (c.command) {
    case Command::Generate:
      if (c.generator.has_value() == c.experiment.has_value()) {
        throw UsageError("generate needs exactly one of a generator spec or an experiment name");
      }
      if (!c.output) throw UsageError("generate needs an output path");
      forbid(c.input_csv.has_value(), "input_csv");
      if (c.partitions == 0) throw UsageError("partitions must be at least 1");
      break;
    case Command::Detect:
      if (!c.input_csv) throw UsageError("detect needs an input CSV");
      if (!c.output) throw UsageError("detect needs an output directory");
      forbid(c.generator.has_value(), "generator");
      forbid(c.experiment.has_value(), "experiment");
      break;
    case Command::Experiment:
      if (!c.experiment) throw UsageError("experiment needs an experiment name");
      forbid(c.generator.has_value(), "generator");
      forbid(c.input_csv.has_value(), "input_csv");
      if (c.replications == 0) throw UsageError("replications must be at least 1");
      break;
  }
  if (c.experiment) find_experiment(*c.experiment);
}

DetectConfig detect_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("'detect' must be an object");
  static const std::set<std::string> keys{"k_grid",   "q_list",    "thresholds",
                                          "rank_mode", "angular_k", "grid_size"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.contains(k)) throw ConfigError("detect: unknown field '" + k + "'");
  }
  DetectConfig c;
  if (j.contains("k_grid")) {
    const auto& g = j.at("k_grid");
    if (!g.is_object()) throw ConfigError("'k_grid' must be an object");
    for (const auto& [k, v] : g.items()) {
      if (k != "min" && k != "max" && k != "step") {
        throw ConfigError("k_grid: unknown field '" + k + "'");
      }
    }
    if (g.contains("min")) c.k_grid.min = get_size(g, "min");
    if (g.contains("max")) c.k_grid.max = get_size(g, "max");
    if (g.contains("step")) c.k_grid.step = get_size(g, "step");
  }
  if (j.contains("q_list")) {
    const auto& q = j.at("q_list");
    if (!q.is_array()) throw ConfigError("'q_list' must be an array");
    c.q_list.clear();
    for (const auto& v : q) {
      if (!v.is_number()) throw ConfigError("'q_list' entries must be numbers");
      const double x = v.get<double>();
      if (!(x > 0.0 && x < 1.0)) throw ConfigError("'q_list' entries must lie in (0,1)");
      c.q_list.push_back(x);
    }
  }
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    if (!t.is_array()) throw ConfigError("'thresholds' must be an array");
    c.thresholds.clear();
    for (const auto& v : t) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
        throw ConfigError("'thresholds' entries must be positive integers");
      }
      c.thresholds.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("rank_mode")) c.rank_mode = rank_mode_from_string(get_string(j, "rank_mode"));
  if (j.contains("angular_k")) c.angular_k = get_size(j, "angular_k");
  if (j.contains("grid_size")) c.grid_size = get_size(j, "grid_size");
  return c;
}

json to_json(const DetectConfig& c) {
  return {{"k_grid", {{"min", c.k_grid.min}, {"max", c.k_grid.max}, {"step", c.k_grid.step}}},
          {"q_list", c.q_list},
          {"thresholds", c.thresholds},
          {"rank_mode", to_string(c.rank_mode)},
          {"angular_k", c.angular_k},
          {"grid_size", c.grid_size}};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  if (!j.contains("command")) throw UsageError("run config is missing 'command'");
  RunConfig c;
  c.command = command_from_string(get_string(j, "command"));
  const auto& allowed = allowed_keys(c.command);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) {
      throw UsageError("'" + k + "' is not used by the " + to_string(c.command) + " command");
    }
  }
  try {
    if (j.contains("generator")) c.generator = spec_from_json(j.at("generator"));
    if (j.contains("experiment")) c.experiment = get_string(j, "experiment");
    if (j.contains("input_csv")) c.input_csv = get_string(j, "input_csv");
    if (j.contains("output")) c.output = get_string(j, "output");
    if (j.contains("seed")) c.seed = get_u64(j, "seed");
    if (j.contains("n")) c.n = get_size(j, "n");
    if (j.contains("partitions")) c.partitions = get_size(j, "partitions");
    if (j.contains("replications")) c.replications = get_size(j, "replications");
    if (j.contains("threads")) c.threads = get_size(j, "threads");
    if (j.contains("detect")) c.detect = detect_config_from_json(j.at("detect"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  json j{{"command", to_string(c.command)}};
  if (c.output) j["output"] = c.output->string();
  switch (c.command) {
    case Command::Generate:
      if (c.generator) j["generator"] = to_json(*c.generator);
      if (c.experiment) j["experiment"] = *c.experiment;
      j["n"] = c.n;
      j["seed"] = c.seed;
      j["partitions"] = c.partitions;
      j["threads"] = c.threads;
      break;
    case Command::Detect:
      if (c.input_csv) j["input_csv"] = c.input_csv->string();
      j["detect"] = to_json(c.detect);
      break;
    case Command::Experiment:
      if (c.experiment) j["experiment"] = *c.experiment;
      j["replications"] = c.replications;
      j["seed"] = c.seed;
      j["n"] = c.n;
      j["threads"] = c.threads;
      break;
  }
  return j;
}

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> registry = [] {
    const HiddenAngularSpec shifted{Probability(0.5), law::ShiftedUnitExponential{},
                                    law::ShiftedUnitExponential{}};
    const gen::HiddenE0 v31{TailIndex(2.0), shifted};
    auto ex31 = [&](const char* name, double alpha) {
      return Experiment{name,
                        "axes Y with Pareto(" + format_double(alpha) +
                            ") plus hidden E0 V with alpha0=2, Theta=1+Exp(1)",
                        gen::Additive{gen::AxesY::pareto(alpha, 0.5), v31}, 100};
    };
    const auto y32 = gen::AxesY::pareto(0.5, 0.5);
    const law::Pareto theta{TailIndex(1.0)};
    return std::vector<Experiment>{
        ex31("ex31-case1", 1.0),
        ex31("ex31-case2", 1.5),
        ex31("ex31-case3", 0.5),
        {"ex32-case1", "axes Y Pareto(0.5) plus iid Pareto(1) pair",
         gen::Additive{y32, gen::IidParetoPair{TailIndex(1.0)}}, 200},
        {"ex32-case2", "axes Y Pareto(0.5) plus radial-ratio V with alpha0=1.25, Theta~Pareto(1)",
         gen::Additive{y32, gen::RadialRatio{TailIndex(1.25), theta, Probability(0.5)}}, 200},
        {"ex32-case3", "axes Y Pareto(0.5) plus radial-ratio V with alpha0=1.5, Theta~Pareto(1)",
         gen::Additive{y32, gen::RadialRatio{TailIndex(1.5), theta, Probability(0.5)}}, 200},
    };
  }();
  return registry;
}

const Experiment& find_experiment(const std::string& name) {
  std::string names;
  for (const auto& e : experiments()) {
    if (e.name == name) return e;
    names += (names.empty() ? "" : ", ") + e.name;
  }
  throw UsageError("unknown experiment '" + name + "' (valid: " + names + ")");
}

ReferenceK ReferenceK::for_sample(std::size_t n, std::size_t threshold) {
  return {n / 20, n / 10, n / 100, threshold, threshold / 2};
}

Estimates point_estimates(std::span<const Point> pairs, const ReferenceK& ref, double pickands_q) {
  const std::size_t n = pairs.size();
  std::vector<double> z1(n), z2(n), mins(n);
  for (std::size_t i = 0; i < n; ++i) {
    z1[i] = pairs[i].z1;
    z2[i] = pairs[i].z2;
    mins[i] = std::min(z1[i], z2[i]);
  }
  Estimates e;
  e["marginal_alpha_1"] = or_nan([&] { return hill_capped(positive_part(z1), ref.marginal); });
  e["marginal_alpha_2"] = or_nan([&] { return hill_capped(positive_part(z2), ref.marginal); });
  e["min_alpha"] = or_nan([&] { return hill_capped(positive_part(mins), ref.marginal); });

  std::vector<double> a1, th1, a2, th2;
  for (const Point& p : pairs) {
    if (!(p.z1 > 0.0 && p.z2 > 0.0)) continue;
    if (p.z1 > p.z2) {
      a1.push_back(p.z2);
      th1.push_back(p.z1 / p.z2);
    } else {
      a2.push_back(p.z1);
      th2.push_back(p.z2 / p.z1);
    }
  }
  auto cev = [&](const std::vector<double>& a, const std::vector<double>& th,
                 const std::string& name) {
    const std::size_t k = std::min(ref.cev, a.size());
    std::vector<double> neg(th.size());
    std::transform(th.begin(), th.end(), neg.begin(), [](double t) { return -t; });
    e["hillish_" + name + "_pos"] = or_nan([&] { return hillish(a, th, k); });
    e["hillish_" + name + "_neg"] = or_nan([&] { return hillish(a, neg, k); });
    e["pickandsish_" + name] = or_nan([&] { return pickandsish(a, th, k, pickands_q); });
  };
  cev(a1, th1, "first");
  cev(a2, th2, "second");

  e["qhat"] = or_nan([&] {
    const std::size_t k = std::min(ref.qhat, n);
    const std::size_t grid[] = {k};
    const auto s = qhat_series(z1, z2, grid);
    return s.points.empty() ? kNaN : s.points.front().value;
  });

  ThresholdedRatios ratios;
  bool have_ratios = true;
  try {
    ratios = thresholded_ratios(pairs, std::min(ref.threshold, n));
  } catch (const Error&) {
    have_ratios = false;
  }
  auto ratio_alpha = [&](const std::vector<double>& x) {
    return have_ratios ? or_nan([&] { return hill_capped(x, ref.ratio); }) : kNaN;
  };
  e["ratio_tail_alpha"] = ratio_alpha(ratios.theta_max);
  e["ratio_tail_alpha_1"] = ratio_alpha(ratios.theta_first);
  e["ratio_tail_alpha_2"] = ratio_alpha(ratios.theta_second);
  return e;
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

json to_json(const ExperimentSummary& s) {
  auto estimates = [](const Estimates& e) {
    json j = json::object();
    for (const auto& [k, v] : e) j[k] = std::isfinite(v) ? json(v) : json(nullptr);
    return j;
  };
  json reps = json::array();
  for (std::size_t i = 0; i < s.replications.size(); ++i) {
    reps.push_back({{"seed", s.seeds[i]}, {"estimates", estimates(s.replications[i])}});
  }
  return {{"experiment", s.name},
          {"spec", to_json(s.spec)},
          {"n", s.n},
          {"base_seed", s.base_seed},
          {"seeds", s.seeds},
          {"tool_version", kVersion},
          {"rng", std::string(RngStream::kIdentity)},
          {"reference_k",
           {{"marginal", s.reference.marginal},
            {"cev", s.reference.cev},
            {"qhat", s.reference.qhat},
            {"threshold", s.reference.threshold},
            {"ratio", s.reference.ratio}}},
          {"replications", reps},
          {"medians", estimates(s.medians)}};
}

SampleBatch run_generate(const RunConfig& config) {
  validate(config);
  if (config.command != Command::Generate) throw UsageError("run_generate needs a generate config");
  const GeneratorSpec spec =
      config.generator ? *config.generator : find_experiment(*config.experiment).spec;
  SampleBatch batch = generate(spec, config.n, config.seed, config.partitions, config.threads);
  write_csv(*config.output, batch.pairs);
  json meta = batch_meta_json(batch.meta);
  meta["spec"] = to_json(spec);
  meta["tool_version"] = kVersion;
  if (config.experiment) meta["experiment"] = *config.experiment;
  write_text(config.output->string() + ".meta.json", meta.dump(1) + "\n");
  return batch;
}

DetectionReport run_detect(const RunConfig& config) {
  validate(config);
  if (config.command != Command::Detect) throw UsageError("run_detect needs a detect config");
  const auto pairs = read_csv(*config.input_csv);
  DetectionReport r = detect_report(pairs, config.detect, config.input_csv->filename().string());
  write_report(*config.output, r);
  return r;
}

ExperimentSummary run_experiment(const std::string& name, std::size_t replications,
                                 std::uint64_t base_seed, std::size_t n, std::size_t threads) {
  const Experiment& ex = find_experiment(name);
  if (replications == 0) throw UsageError("replications must be at least 1");
  ExperimentSummary s{.name = ex.name,
                      .spec = ex.spec,
                      .n = n,
                      .base_seed = base_seed,
                      .reference = ReferenceK::for_sample(n, ex.reference_threshold),
                      .seeds = {},
                      .replications = {},
                      .medians = {}};
  for (std::size_t i = 0; i < replications; ++i) s.seeds.push_back(base_seed + i);
  s.replications.resize(replications);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(replications);
  auto work = [&] {
    for (std::size_t i = next++; i < replications; i = next++) {
      try {
        const auto batch = generate(ex.spec, n, s.seeds[i]);
        s.replications[i] = point_estimates(batch.pairs, s.reference);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, replications);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (const auto& [key, v] : s.replications.front()) {
    std::vector<double> col;
    for (const auto& r : s.replications) col.push_back(r.at(key));
    s.medians[key] = median(std::move(col));
  }
  return s;
}

ExperimentSummary run_experiment(const RunConfig& config) {
  validate(config);
  if (config.command != Command::Experiment) {
    throw UsageError("run_experiment needs an experiment config");
  }
  auto s = run_experiment(*config.experiment, config.replications, config.seed, config.n,
                          config.threads);
  if (config.output) write_text(*config.output, to_json(s).dump(1) + "\n");
  return s;
}

}  // namespace hrvlab
