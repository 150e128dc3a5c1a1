#pragma once

#include "qz/radial.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace qz::cli {

using json = nlohmann::ordered_json;

// 17 significant digits, enough to round-trip a double
std::string fmt(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream os_;
  std::size_t width_;
};

// One comparison against a published number.
struct Comparison {
  std::string name;
  double computed = 0.0;
  double reference_value = 0.0;
  double tolerance = 0.0;  // relative unless absolute is set
  bool absolute = false;
  std::string note;

  double error() const;
  bool pass() const { return error() <= tolerance; }
};
json to_json(const Comparison& c);

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::string version;
  json grid_hashes = json::object();
  std::vector<std::string> outputs;
  json results = json::object();
  double wall_clock = 0.0;
  bool passed = true;

  void add_output(const std::string& path) { outputs.push_back(path); }
  json to_json() const;
  // Throws if a listed output is missing.
  void write(const std::string& path) const;
};

std::string code_version();
// FNV-1a over the grid dimension, extent and node values.
std::string grid_hash(const RadialGrid& g);

// Creates the directory if needed and returns dir/name.
std::string output_path(const std::string& dir, const std::string& name);

// Writes json with 17 significant digits for every number.
void write_json(const std::string& path, const json& j);
std::string dump_json(const json& j);

}  // namespace qz::cli
