#include "dnls/harness/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dnls/errors.hpp"

namespace dnls::harness {

using json = nlohmann::json;

namespace {

constexpr char magic[8] = {'D', 'N', 'L', 'S', 'C', 'K', 'P', 'T'};
constexpr std::size_t header_bytes = 8 + 4 * 8;

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xff);
    return r;
  }
  return v;
}

void put_u64(std::string& buf, std::uint64_t v) {
  v = to_le(v);
  char b[8];
  std::memcpy(b, &v, 8);
  buf.append(b, 8);
}

void put_f64(std::string& buf, double d) { put_u64(buf, std::bit_cast<std::uint64_t>(d)); }

std::uint64_t get_u64(const std::string& buf, std::size_t off) {
  std::uint64_t v;
  std::memcpy(&v, buf.data() + off, 8);
  return to_le(v);
}

double get_f64(const std::string& buf, std::size_t off) {
  return std::bit_cast<double>(get_u64(buf, off));
}

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

json cell_json(const std::string& s) {
  if (s.empty()) return nullptr;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end && *end == '\0') return v;
  return s;
}

}  // namespace

void write_checkpoint(const FieldPair& pair, const std::string& path) {
  const Grid& g = pair.grid();
  std::string buf;
  buf.reserve(header_bytes + 32 * g.size());
  buf.append(magic, 8);
  put_u64(buf, checkpoint_version);
  put_u64(buf, g.size());
  put_f64(buf, g.length());
  put_f64(buf, pair.time());
  for (const auto* f : {&pair.u1, &pair.u2})
    for (const cplx& z : f->values) {
      put_f64(buf, z.real());
      put_f64(buf, z.imag());
    }
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write checkpoint '" + path + "'");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw InputError("short write to checkpoint '" + path + "'");
}

FieldPair read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  if (buf.size() < header_bytes) throw FormatError("checkpoint truncated: incomplete header");
  if (std::memcmp(buf.data(), magic, 8) != 0) throw FormatError("checkpoint has bad magic");
  const std::uint64_t version = get_u64(buf, 8);
  if (version != checkpoint_version)
    throw FormatError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                      std::to_string(checkpoint_version) + ")");
  const std::uint64_t n = get_u64(buf, 16);
  const double length = get_f64(buf, 24);
  const double t = get_f64(buf, 32);
  if (n > (std::uint64_t{1} << 40)) throw FormatError("checkpoint corrupt: implausible N");
  const std::size_t expected = header_bytes + 32 * static_cast<std::size_t>(n);
  if (buf.size() != expected)
    throw FormatError("checkpoint corrupt: header N = " + std::to_string(n) +
                      " does not match payload of " + std::to_string(buf.size() - header_bytes) +
                      " bytes");
  Grid g;
  try {
    g = make_grid(static_cast<std::size_t>(n), length);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint corrupt: ") + e.what());
  }
  std::size_t off = header_bytes;
  auto read_field = [&] {
    std::vector<cplx> v(n);
    for (auto& z : v) {
      z = cplx(get_f64(buf, off), get_f64(buf, off + 8));
      off += 16;
    }
    return ComplexField(g, std::move(v), t);
  };
  ComplexField a = read_field();
  ComplexField b = read_field();
  return FieldPair(std::move(a), std::move(b));
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw InputError("table " + schema + ": row width does not match the header");
  rows.push_back(std::move(row));
}

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

void write_csv(const Table& table, const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "# dnls " << table.schema << " v" << csv_schema_version << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

void write_table_json(const Table& table, const std::string& path) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row = json::array();
    for (const auto& c : r) row.push_back(cell_json(c));
    rows.push_back(std::move(row));
  }
  const json j{{"schema", table.schema},
               {"version", csv_schema_version},
               {"columns", table.columns},
               {"rows", rows}};
  ensure_parent(path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("# dnls ", 0) != 0)
    throw FormatError("'" + path + "' lacks the dnls schema line");
  std::istringstream head(line.substr(7));
  Table t;
  std::string version;
  head >> t.schema >> version;
  if (version != "v" + std::to_string(csv_schema_version))
    throw FormatError("'" + path + "' has unsupported schema version " + version);
  if (!std::getline(in, line)) throw FormatError("'" + path + "' lacks a header row");
  t.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.add(split_csv_line(line));
  }
  return t;
}

void RunManifest::write(const std::string& out_dir) const {
  json j{{"command", command},
         {"preset", preset},
         {"config_hash", fmt(config_hash)},
         {"code_version", code_version},
         {"grid", {{"n_points", n_points}, {"length", length}}},
         {"seed", seed},
         {"threads", threads},
         {"deterministic", deterministic},
         {"status", status},
         {"timings", timings},
         {"guard_events", guard_events},
         {"files", files}};
  j["diagnostics"] = json::parse(diagnostics_json);
  j["initial_data"] = json::parse(initial_data_json);
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / "manifest.json").string();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InputError("cannot write manifest in '" + out_dir + "'");
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dnls::harness
