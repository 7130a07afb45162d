#pragma once

#include "rlab/interaction.hpp"
#include "rlab/spectral.hpp"
#include "rlab/symbolsplit.hpp"

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab::cli {

// Invalid or incomplete configuration; maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// View of one TOML table that records which keys were read; finish() rejects
// everything else.
class Section {
 public:
  // t points at a toml::table owned by the ConfigFile
  Section(const void* t, std::string path, std::string file);

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::vector<double>> rows(const std::string& key) const;
  Section sub(const std::string& key) const;
  std::optional<Section> optional_sub(const std::string& key) const;

  void finish() const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

 private:
  std::string where(const std::string& key) const;
  const void* t_;
  std::string path_, file_;
  std::shared_ptr<std::set<std::string>> used_;
};

class ConfigFile {
 public:
  explicit ConfigFile(const std::string& path);
  ConfigFile(const ConfigFile&) = delete;
  ConfigFile& operator=(const ConfigFile&) = delete;

  Section root() const;
  const std::string& text() const { return text_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_, text_;
  std::shared_ptr<void> table_;
};

// Builders from config sections. Each one consumes and validates its keys.
RadialProfile read_profile(const Section& s);
Dispersion read_dispersion(const Section& s, int d);
// [phase]: either ww = "--" (with g, sigma) or tables a, b, c.
PhaseTriple read_phase(const Section& s);
GaussianData read_gaussian(const Section& s, int d);
SpectralGrid read_grid(const Section& s);
// kind = "constant" (value) or "ww_m2_truncated" (g, sigma)
BilinearSymbol read_symbol(const Section& s, int d);
GradientSelector read_selector(const std::string& s, const Section& where, const std::string& key);
Region read_region(const std::string& s, const Section& where, const std::string& key);

Vec to_vec(const std::vector<double>& v);

}  // namespace rlab::cli
