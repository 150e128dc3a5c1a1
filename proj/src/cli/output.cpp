#include "qz/cli_output.hpp"

#include "qz/errors.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <sstream>

namespace qz::cli {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), os_(path), width_(columns.size()) {
  if (!os_) throw ValidationError("cannot open " + path + " for writing");
  for (std::size_t k = 0; k < columns.size(); ++k) os_ << (k ? "," : "") << columns[k];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw ValidationError(path_ + ": row width mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) os_ << (k ? "," : "") << fmt(values[k]);
  os_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw ValidationError(path_ + ": row width mismatch");
  for (std::size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << cells[k];
  os_ << '\n';
}

double Comparison::error() const {
  const double diff = std::abs(computed - reference_value);
  if (absolute || reference_value == 0.0) return diff;
  return diff / std::abs(reference_value);
}

json to_json(const Comparison& c) {
  json j;
  j["name"] = c.name;
  j["computed"] = c.computed;
  j["reference_value"] = c.reference_value;
  j[c.absolute ? "abs_err" : "rel_err"] = c.error();
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass();
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

std::string code_version() {
#ifdef QZLAB_VERSION
  return QZLAB_VERSION;
#else
  return "0.1.0";
#endif
}

std::string grid_hash(const RadialGrid& g) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= b[k];
      h *= 1099511628211ull;
    }
  };
  feed(&g.d, sizeof g.d);
  feed(&g.n, sizeof g.n);
  feed(&g.r_max, sizeof g.r_max);
  feed(g.nodes.data(), sizeof(double) * g.nodes.size());
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["version"] = version.empty() ? code_version() : version;
  j["grid_hashes"] = grid_hashes;
  j["outputs"] = outputs;
  j["results"] = results;
  j["wall_clock"] = wall_clock;
  j["passed"] = passed;
  return j;
}

void RunManifest::write(const std::string& path) const {
  for (const auto& f : outputs)
    if (!std::filesystem::exists(f)) throw SolverError("manifest lists missing output " + f);
  write_json(path, to_json());
}

std::string output_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

std::string dump_json(const json& j) {
  // nlohmann prints the shortest representation that round-trips, at most 17 digits
  return j.dump(2);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << dump_json(j) << '\n';
}

}  // namespace qz::cli
