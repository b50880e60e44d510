#include "hrvlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hrvlab/version.hpp"

namespace hrvlab {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV record (no embedded newlines) into unquoted fields.
std::vector<std::string> split_record(const std::string& line, std::size_t row, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty() && !was_quoted) {
      quoted = was_quoted = true;
      cur.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw DataError("row " + std::to_string(row) + " (line " + std::to_string(lineno) +
                    "): unterminated quoted field");
  }
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

double parse_field(const std::string& f, std::size_t row, std::size_t lineno) {
  double v = 0.0;
  const char* b = f.data();
  const char* e = f.data() + f.size();
  if (!f.empty() && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (f.empty() || res.ec != std::errc{} || res.ptr != e || !std::isfinite(v)) {
    throw DataError("row " + std::to_string(row) + " (line " + std::to_string(lineno) +
                    "): not a finite number: '" + f + "'");
  }
  return v;
}

json series_points(const DiagnosticSeries& s) {
  json arr = json::array();
  for (const auto& p : s.points) arr.push_back(json::array({p.k, p.value}));
  return arr;
}

json qq_json(const std::vector<QQPoint>& qq) {
  json arr = json::array();
  for (const auto& p : qq) arr.push_back(json::array({p.theoretical, p.empirical}));
  return arr;
}

void put_series(json& series, const DiagnosticSeries& s) { series[s.label] = series_points(s); }

std::string series_csv(const DiagnosticSeries& s) {
  std::string out = "k,value\n";
  for (const auto& p : s.points) out += std::to_string(p.k) + "," + format_double(p.value) + "\n";
  return out;
}

std::string qq_csv(const std::vector<QQPoint>& qq) {
  std::string out = "theoretical,empirical\n";
  for (const auto& p : qq) out += format_double(p.theoretical) + "," + format_double(p.empirical) + "\n";
  return out;
}

std::string density_csv(const DensityEstimate& d) {
  std::string out = "x,density\n";
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    out += format_double(d.grid[i]) + "," + format_double(d.density[i]) + "\n";
  }
  return out;
}

std::string values_csv(const std::vector<double>& v) {
  std::string out = "value\n";
  for (double x : v) out += format_double(x) + "\n";
  return out;
}

template <class F>
void for_each_series(const DetectionReport& r, F&& f) {
  f(r.marginal_hill_1);
  f(r.marginal_hill_2);
  f(r.min_hill);
  for (const auto* b : {&r.first, &r.second}) {
    f(b->hillish_pos);
    f(b->hillish_neg);
    for (const auto& s : b->pickandsish) f(s);
  }
  f(r.qhat);
  for (const auto& t : r.thresholds) {
    f(t.ratio_tail_hill_1);
    f(t.ratio_tail_hill_2);
    f(t.ratio_tail_hill_max);
  }
}

template <class F>
void for_each_qq(const DetectionReport& r, F&& f) {
  for (const auto& t : r.thresholds) {
    const std::string tag = "_t" + std::to_string(t.threshold);
    if (!t.qq_theta_max.empty()) f("qq_theta_max" + tag, t.qq_theta_max);
    if (!t.qq_log_theta_1.empty()) f("qq_log_theta_1" + tag, t.qq_log_theta_1);
    if (!t.qq_log_theta_2.empty()) f("qq_log_theta_2" + tag, t.qq_log_theta_2);
  }
}

template <class F>
void for_each_density(const DetectionReport& r, F&& f) {
  for (const auto& t : r.thresholds) {
    const std::string tag = "_t" + std::to_string(t.threshold);
    if (t.ratio_kde_1) f("ratio_kde_1" + tag, *t.ratio_kde_1);
    if (t.ratio_kde_2) f("ratio_kde_2" + tag, *t.ratio_kde_2);
  }
  f(std::string("angular_density"), r.angular_density);
}

template <class F>
void for_each_ratio_sample(const DetectionReport& r, F&& f) {
  for (const auto& t : r.thresholds) {
    const std::string tag = "_t" + std::to_string(t.threshold);
    f("theta_first" + tag, t.ratios.theta_first);
    f("theta_second" + tag, t.ratios.theta_second);
    f("theta_max" + tag, t.ratios.theta_max);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, std::span<const Point> pairs) {
  std::string out = "z1,z2\n";
  out.reserve(pairs.size() * 40 + 8);
  for (const Point& p : pairs) {
    out += format_double(p.z1);
    out += ',';
    out += format_double(p.z2);
    out += '\n';
  }
  os << out;
}

void write_csv(const std::filesystem::path& path, std::span<const Point> pairs) {
  std::ostringstream os;
  write_csv(os, pairs);
  write_text(path, os.str());
}

std::vector<Point> read_csv(std::istream& is) {
  std::vector<Point> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      const auto fields = split_record(line, 0, lineno);
      if (fields.size() != 2 || fields[0] != "z1" || fields[1] != "z2") {
        throw DataError("line 1: expected header 'z1,z2', got '" + line + "'");
      }
      header = true;
      continue;
    }
    if (trim(line).empty()) continue;
    const std::size_t row = out.size() + 1;
    const auto fields = split_record(line, row, lineno);
    if (fields.size() != 2) {
      throw DataError("row " + std::to_string(row) + " (line " + std::to_string(lineno) +
                      "): expected 2 fields, got " + std::to_string(fields.size()));
    }
    const Point p{parse_field(fields[0], row, lineno), parse_field(fields[1], row, lineno)};
    if (p.z1 < 0.0 || p.z2 < 0.0) {
      throw DomainError("row " + std::to_string(row) + " (line " + std::to_string(lineno) +
                        "): negative value");
    }
    out.push_back(p);
  }
  if (!header) throw DataError("empty CSV: missing 'z1,z2' header");
  return out;
}

std::vector<Point> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return read_csv(in);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

json batch_meta_json(const BatchMeta& meta) {
  return {{"spec_fingerprint", meta.spec_fingerprint},
          {"seed", meta.seed},
          {"n", meta.n},
          {"partitions", meta.partitions},
          {"rng", meta.rng}};
}

json to_json(const DiagnosticSeries& s) { return {{"label", s.label}, {"points", series_points(s)}}; }

json to_json(const DensityEstimate& d) {
  return {{"bandwidth", d.bandwidth}, {"x", d.grid}, {"density", d.density}};
}

json to_json(const DetectionReport& r) {
  json meta{{"schema_version", kReportSchemaVersion},
            {"tool_version", kVersion},
            {"n", r.meta.n},
            {"provenance", r.meta.provenance},
            {"rank_mode", to_string(r.meta.rank_mode)},
            {"k_grid", r.meta.k_grid},
            {"q_list", r.meta.q_list},
            {"thresholds", r.meta.thresholds},
            {"angular_k", r.meta.angular_k},
            {"branch_sizes", {{"first", r.first.size}, {"second", r.second.size}}},
            {"skipped", r.meta.skipped}};
  json series = json::object();
  for_each_series(r, [&](const DiagnosticSeries& s) { put_series(series, s); });
  json qq = json::object();
  for_each_qq(r, [&](const std::string& label, const auto& pts) { qq[label] = qq_json(pts); });
  json densities = json::object();
  for_each_density(r, [&](const std::string& label, const DensityEstimate& d) {
    densities[label] = to_json(d);
  });
  json ratios = json::object();
  for_each_ratio_sample(r, [&](const std::string& label, const std::vector<double>& v) {
    ratios[label] = v;
  });
  return {{"meta", meta}, {"series", series}, {"qq", qq}, {"densities", densities},
          {"ratios", ratios}};
}

void write_report(const std::filesystem::path& dir, const DetectionReport& r) {
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const char* sub : {"series", "qq", "densities", "ratios"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) throw DataError("cannot create '" + (dir / sub).string() + "': " + ec.message());
  }
  write_text(dir / "report.json", to_json(r).dump(1) + "\n");
  for_each_series(r, [&](const DiagnosticSeries& s) {
    write_text(dir / "series" / (s.label + ".csv"), series_csv(s));
  });
  for_each_qq(r, [&](const std::string& label, const auto& pts) {
    write_text(dir / "qq" / (label + ".csv"), qq_csv(pts));
  });
  for_each_density(r, [&](const std::string& label, const DensityEstimate& d) {
    write_text(dir / "densities" / (label + ".csv"), density_csv(d));
  });
  for_each_ratio_sample(r, [&](const std::string& label, const std::vector<double>& v) {
    write_text(dir / "ratios" / (label + ".csv"), values_csv(v));
  });
}

}  // namespace hrvlab
