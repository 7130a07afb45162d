#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rlab::cli {

// 64-bit FNV-1a, hex encoded
std::string content_hash(const std::string& bytes);

// 17 significant digits, '.' separator
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  size_t columns_;
};

// Output directory with a manifest describing every file written into it.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string command, std::string config_text, std::uint64_t seed,
            int threads);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file(const std::string& name) const { return dir_ / name; }
  CsvWriter csv(const std::string& name, const std::vector<std::string>& header);
  void json(const std::string& name, const nlohmann::json& j);
  // hashes every registered file and writes manifest.json
  void finish(const nlohmann::json& extra = {});

 private:
  std::filesystem::path dir_;
  std::string command_, config_hash_;
  std::uint64_t seed_;
  int threads_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_;
};

struct CheckResult {
  int manifests = 0, files = 0;
  std::vector<std::string> problems;
  bool ok() const { return manifests > 0 && problems.empty(); }
};

// Re-validates manifest.json files found in dir (recursively).
CheckResult check_manifests(const std::filesystem::path& dir);

}  // namespace rlab::cli
