#include "rlab/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#ifndef RLAB_VERSION
#define RLAB_VERSION "unknown"
#endif

namespace rlab::cli {

namespace fs = std::filesystem;

namespace {

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row width does not match the header");
  for (size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

OutputDir::OutputDir(fs::path dir, std::string command, std::string config_text, std::uint64_t seed, int threads)
    : dir_(std::move(dir)),
      command_(std::move(command)),
      config_hash_(content_hash(config_text + "\nseed=" + std::to_string(seed))),
      seed_(seed),
      threads_(threads),
      start_(std::chrono::steady_clock::now()) {
  fs::create_directories(dir_);
}

CsvWriter OutputDir::csv(const std::string& name, const std::vector<std::string>& header) {
  files_.push_back(name);
  return CsvWriter(file(name), header);
}

void OutputDir::json(const std::string& name, const nlohmann::json& j) {
  files_.push_back(name);
  std::ofstream out(file(name), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file(name).string());
  out << j.dump(2) << '\n';
}

void OutputDir::finish(const nlohmann::json& extra) {
  nlohmann::json m;
  m["command"] = command_;
  m["version"] = RLAB_VERSION;
  m["config_hash"] = config_hash_;
  m["seed"] = seed_;
  m["threads"] = threads_;
  m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : files_) files.push_back({{"name", f}, {"hash", content_hash(read_all(file(f)))}});
  m["files"] = files;
  if (!extra.is_null()) m["summary"] = extra;
  std::ofstream out(file("manifest.json"), std::ios::binary);
  out << m.dump(2) << '\n';
}

CheckResult check_manifests(const fs::path& dir) {
  CheckResult r;
  if (!fs::is_directory(dir)) {
    r.problems.push_back(dir.string() + " is not a directory");
    return r;
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().filename() != "manifest.json") continue;
    ++r.manifests;
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(read_all(entry.path()));
    } catch (const std::exception& e) {
      r.problems.push_back(entry.path().string() + ": " + e.what());
      continue;
    }
    for (const char* key : {"command", "version", "config_hash", "wall_time_s", "files"})
      if (!m.contains(key)) r.problems.push_back(entry.path().string() + ": missing '" + key + "'");
    if (!m.contains("files") || !m["files"].is_array()) continue;
    const fs::path base = entry.path().parent_path();
    for (const auto& f : m["files"]) {
      ++r.files;
      const fs::path p = base / f.value("name", "");
      if (!fs::exists(p)) {
        r.problems.push_back(p.string() + ": missing");
        continue;
      }
      const std::string bytes = read_all(p);
      if (content_hash(bytes) != f.value("hash", "")) r.problems.push_back(p.string() + ": hash mismatch");
      if (p.extension() == ".csv" && (bytes.empty() || bytes.find('\n') == std::string::npos))
        r.problems.push_back(p.string() + ": no header row");
    }
  }
  if (r.manifests == 0) r.problems.push_back("no manifest.json under " + dir.string());
  return r;
}

}  // namespace rlab::cli
