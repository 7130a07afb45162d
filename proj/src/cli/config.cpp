#include "rlab/cli/config.hpp"

#include "rlab/waterwaves.hpp"

#include <toml.hpp>

#include <fstream>
#include <sstream>

namespace rlab::cli {

namespace {

const toml::table& tab(const void* t) { return *static_cast<const toml::table*>(t); }

std::string line_of(const toml::node& n) {
  const auto& src = n.source();
  return src.begin.line ? " (line " + std::to_string(src.begin.line) + ")" : "";
}

}  // namespace

Section::Section(const void* t, std::string path, std::string file)
    : t_(t), path_(std::move(path)), file_(std::move(file)), used_(std::make_shared<std::set<std::string>>()) {}

std::string Section::where(const std::string& key) const {
  const std::string name = path_.empty() ? key : path_ + "." + key;
  std::string loc;
  if (const toml::node* n = tab(t_).get(key)) loc = line_of(*n);
  return file_ + ": " + name + loc;
}

void Section::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(where(key) + ": " + what);
}

bool Section::has(const std::string& key) const { return tab(t_).contains(key); }

double Section::number(const std::string& key) const {
  const toml::node* n = tab(t_).get(key);
  if (!n) throw ConfigError(file_ + ": missing key '" + key + "' in [" + path_ + "]");
  used_->insert(key);
  if (auto v = n->value<double>()) return *v;
  fail(key, "expected a number");
}

double Section::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

long Section::integer(const std::string& key) const {
  const toml::node* n = tab(t_).get(key);
  if (!n) throw ConfigError(file_ + ": missing key '" + key + "' in [" + path_ + "]");
  used_->insert(key);
  if (n->is_integer()) return static_cast<long>(n->as_integer()->get());
  // 1e6 style counts
  if (auto v = n->value<double>(); v && *v == std::floor(*v) && std::abs(*v) < 9e15) return static_cast<long>(*v);
  fail(key, "expected an integer");
}

long Section::integer(const std::string& key, long fallback) const { return has(key) ? integer(key) : fallback; }

bool Section::boolean(const std::string& key, bool fallback) const {
  const toml::node* n = tab(t_).get(key);
  if (!n) return fallback;
  used_->insert(key);
  if (auto v = n->value<bool>()) return *v;
  fail(key, "expected true or false");
}

std::string Section::string(const std::string& key) const {
  const toml::node* n = tab(t_).get(key);
  if (!n) throw ConfigError(file_ + ": missing key '" + key + "' in [" + path_ + "]");
  used_->insert(key);
  if (auto v = n->value<std::string>()) return *v;
  fail(key, "expected a string");
}

std::string Section::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

std::vector<double> Section::numbers(const std::string& key) const {
  const toml::node* n = tab(t_).get(key);
  if (!n) throw ConfigError(file_ + ": missing key '" + key + "' in [" + path_ + "]");
  used_->insert(key);
  const toml::array* a = n->as_array();
  if (!a) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const toml::node& e : *a) {
    auto v = e.value<double>();
    if (!v) fail(key, "expected an array of numbers");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::vector<double>> Section::rows(const std::string& key) const {
  const toml::node* n = tab(t_).get(key);
  if (!n) throw ConfigError(file_ + ": missing key '" + key + "' in [" + path_ + "]");
  used_->insert(key);
  const toml::array* a = n->as_array();
  if (!a) fail(key, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (const toml::node& r : *a) {
    const toml::array* ra = r.as_array();
    if (!ra) fail(key, "expected an array of arrays");
    std::vector<double> row;
    for (const toml::node& e : *ra) {
      auto v = e.value<double>();
      if (!v) fail(key, "expected numbers");
      row.push_back(*v);
    }
    out.push_back(std::move(row));
  }
  return out;
}

Section Section::sub(const std::string& key) const {
  const toml::node* n = tab(t_).get(key);
  const std::string name = path_.empty() ? key : path_ + "." + key;
  if (!n) throw ConfigError(file_ + ": missing section [" + name + "]");
  used_->insert(key);
  if (!n->is_table()) fail(key, "expected a table");
  return Section(n->as_table(), name, file_);
}

std::optional<Section> Section::optional_sub(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return sub(key);
}

void Section::finish() const {
  for (auto&& [k, v] : tab(t_)) {
    const std::string key(k.str());
    if (!used_->count(key)) {
      const std::string name = path_.empty() ? key : path_ + "." + key;
      throw ConfigError(file_ + ": unknown key '" + name + "'" + line_of(v));
    }
  }
}

ConfigFile::ConfigFile(const std::string& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  text_ = ss.str();
  try {
    table_ = std::make_shared<toml::table>(toml::parse(text_, path));
  } catch (const toml::parse_error& e) {
    throw ConfigError(path + ": line " + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
  }
}

Section ConfigFile::root() const { return Section(table_.get(), "", path_); }

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

RadialProfile read_profile(const Section& s) {
  const std::string kind = s.string("kind");
  RadialProfile p = RadialProfile::power(2.0);
  if (kind == "power") {
    const double e = s.number("p");
    if (!(e > 1.0)) s.fail("p", "power profiles need p > 1");
    p = RadialProfile::power(e, s.number("coeff", 1.0), s.number("offset", 0.0));
  } else if (kind == "waterwave") {
    const double g = s.number("g", 1.0), sig = s.number("sigma", 1.0);
    if (!(g > 0 && sig > 0)) s.fail("g", "water waves need g > 0 and sigma > 0");
    p = waterwave_profile(g, sig);
  } else if (kind == "kleingordon") {
    const double m = s.number("mass", 1.0);
    if (!(m > 0)) s.fail("mass", "needs mass > 0");
    p = RadialProfile::klein_gordon(m);
  } else {
    s.fail("kind", "unknown profile kind '" + kind + "' (power, waterwave, kleingordon)");
  }
  const long sign = s.integer("sign", 1);
  if (sign != 1 && sign != -1) s.fail("sign", "sign must be +1 or -1");
  if (sign < 0) p = p.negated();
  s.finish();
  return p;
}

Dispersion read_dispersion(const Section& s, int d) { return Dispersion::radial(d, read_profile(s)); }

PhaseTriple read_phase(const Section& s) {
  const long d = s.integer("d", 2);
  if (d < 2 || d > 3) s.fail("d", "dimension must be 2 or 3");
  if (s.has("ww")) {
    const std::string kind = s.string("ww");
    const double g = s.number("g", 1.0), sig = s.number("sigma", 1.0);
    s.finish();
    try {
      return ww_triple(parse_ww_kind(kind), g, sig, static_cast<int>(d));
    } catch (const DomainError& e) {
      s.fail("ww", e.what());
    }
  }
  Dispersion a = read_dispersion(s.sub("a"), static_cast<int>(d));
  Dispersion b = read_dispersion(s.sub("b"), static_cast<int>(d));
  Dispersion c = read_dispersion(s.sub("c"), static_cast<int>(d));
  s.finish();
  return PhaseTriple(a, b, c);
}

GaussianData read_gaussian(const Section& s, int d) {
  const std::string kind = s.string("kind", "gaussian");
  if (kind != "gaussian") s.fail("kind", "only gaussian data is available");
  GaussianData g;
  g.center = to_vec(s.numbers("center"));
  if (g.center.size() != d) s.fail("center", "needs " + std::to_string(d) + " components");
  g.width = s.number("width");
  if (!(g.width > 0)) s.fail("width", "needs width > 0");
  g.amplitude = s.number("amplitude", 1.0);
  if (s.has("null_direction")) {
    Vec n = to_vec(s.numbers("null_direction"));
    if (n.size() != d) s.fail("null_direction", "needs " + std::to_string(d) + " components");
    g.null_direction = n;
  }
  s.finish();
  return g;
}

SpectralGrid read_grid(const Section& s) {
  const long d = s.integer("d"), n = s.integer("n");
  const double xm = s.number("xi_max");
  if (d < 2 || d > 3) s.fail("d", "dimension must be 2 or 3");
  if (n < 4 || n % 2) s.fail("n", "needs an even n >= 4");
  if (!(xm > 0)) s.fail("xi_max", "needs xi_max > 0");
  s.finish();
  return SpectralGrid(static_cast<int>(d), static_cast<int>(n), xm);
}

BilinearSymbol read_symbol(const Section& s, int d) {
  const std::string kind = s.string("kind");
  if (kind == "constant") {
    const double v = s.number("value", 1.0);
    s.finish();
    return BilinearSymbol::constant(v);
  }
  if (kind == "ww_m2_truncated") {
    const double g = s.number("g", 1.0), sig = s.number("sigma", 1.0);
    if (!(g > 0 && sig > 0)) s.fail("g", "water waves need g > 0 and sigma > 0");
    s.finish();
    return truncated_m2(g, sig, d);
  }
  s.fail("kind", "unknown symbol kind '" + kind + "' (constant, ww_m2_truncated)");
}

GradientSelector read_selector(const std::string& v, const Section& where, const std::string& key) {
  if (v == "full") return GradientSelector::Full;
  if (v == "eta") return GradientSelector::Eta;
  where.fail(key, "unknown gradient selector '" + v + "' (full, eta)");
}

Region read_region(const std::string& v, const Section& where, const std::string& key) {
  if (v == "omega1") return Region::Omega1;
  if (v == "omega2") return Region::Omega2;
  where.fail(key, "unknown region '" + v + "' (omega1, omega2)");
}

}  // namespace rlab::cli
