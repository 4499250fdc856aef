#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dnls/field.hpp"

namespace dnls::harness {

inline constexpr std::uint64_t checkpoint_version = 1;

/// Little-endian layout: "DNLSCKPT", u64 version, u64 N, f64 L, f64 t, then
/// interleaved re/im f64 pairs for u1 followed by u2.
void write_checkpoint(const FieldPair& pair, const std::string& path);
/// FormatError on bad magic, unknown version, truncation or trailing bytes.
FieldPair read_checkpoint(const std::string& path);

inline constexpr int csv_schema_version = 1;

/// A versioned table written as CSV with a JSON mirror.
struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

/// %.17g, so reruns compare bitwise.
std::string fmt(double v);
std::string fmt(std::uint64_t v);

/// First line "# dnls <schema> v<version>", then the header and rows.
void write_csv(const Table& table, const std::string& path);
/// {"schema", "version", "columns", "rows"} with numeric cells as numbers.
void write_table_json(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

struct RunManifest {
  std::string command;
  std::string preset;
  std::uint64_t config_hash = 0;
  std::string code_version;
  std::size_t n_points = 0;
  double length = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool deterministic = false;
  std::string status = "running";
  std::map<std::string, double> timings;
  std::vector<std::string> guard_events;
  std::vector<std::string> files;  ///< relative to the output directory
  std::string diagnostics_json = "{}";
  std::string initial_data_json = "{}";

  void write(const std::string& out_dir) const;
};

}  // namespace dnls::harness
