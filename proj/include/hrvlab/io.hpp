#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hrvlab/generators.hpp"
#include "hrvlab/report.hpp"

namespace hrvlab {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// `z1,z2` header then one LF-terminated row per point.
void write_csv(std::ostream& os, std::span<const Point> pairs);
void write_csv(const std::filesystem::path& path, std::span<const Point> pairs);

/// Parses two nonnegative numeric columns with a `z1,z2` header. Fields may be
/// RFC-4180 quoted. Malformed rows raise DataError naming the data row and
/// file line; negative values raise DomainError.
std::vector<Point> read_csv(std::istream& is);
std::vector<Point> read_csv(const std::filesystem::path& path);

nlohmann::json batch_meta_json(const BatchMeta& meta);

nlohmann::json to_json(const DiagnosticSeries& s);
nlohmann::json to_json(const DensityEstimate& d);
nlohmann::json to_json(const DetectionReport& r);

/// Writes report.json plus series/, qq/, densities/ and ratios/ CSV files.
void write_report(const std::filesystem::path& dir, const DetectionReport& r);

/// Writes text to a file, raising DataError if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hrvlab
