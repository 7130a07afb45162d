#include "rlab/cli/commands.hpp"

#include "rlab/analysis.hpp"
#include "rlab/cli/config.hpp"
#include "rlab/cli/output.hpp"
#include "rlab/interaction.hpp"
#include "rlab/oscillatory.hpp"
#include "rlab/resonance.hpp"
#include "rlab/spectral.hpp"
#include "rlab/symbolsplit.hpp"
#include "rlab/waterwaves.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace rlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string out = "out";
  std::uint64_t seed = 42;
  int threads = 1;
  std::string check;
};

// --out names either a directory or a file whose parent becomes the directory
struct Target {
  fs::path dir;
  std::string primary;
};

Target resolve(const std::string& out, const std::string& default_name) {
  const fs::path p(out);
  const auto ext = p.extension().string();
  if (ext == ".json" || ext == ".csv") return {p.has_parent_path() ? p.parent_path() : fs::path("."), p.filename()};
  return {p, default_name};
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json report_json(const AssumptionReport& r) {
  json j;
  j["method"] = to_string(r.method);
  j["pingouin"] = {{"pass", r.pingouin}, {"margin", r.pingouin_margin}};
  j["A1"] = {{"pass", r.A1}, {"margin", r.A1_margin}};
  j["A2"] = {{"pass", r.A2}, {"margin", r.A2_margin}};
  j["A3"] = {{"pass", r.A3}, {"margin", r.A3_margin}};
  j["pivert"] = r.pivert ? json{{"pass", *r.pivert}, {"margin", r.pivert_margin}}
                         : json{{"pass", nullptr}, {"margin", nullptr}};
  json s = json::array();
  for (const auto& m : r.A3_samples)
    s.push_back({{"sigma", m.sigma}, {"block_ok", m.block_ok}, {"xi_ok", m.xi_ok}, {"block_margin", m.block_margin},
                 {"xi_margin", m.xi_margin}});
  j["A3_samples"] = s;
  j["all_pass"] = r.all_pass();
  return j;
}

json point_json(const ResonancePoint& p) {
  return {{"R", p.R},           {"lambda", p.lambda}, {"xi", vec_json(p.xi)}, {"eta", vec_json(p.eta)},
          {"residual_phi", p.residual_phi}, {"residual_grad", p.residual_grad}};
}

struct AssumptionOptions {
  int sigma_grid = 101;
  std::optional<A3Method> method;
};

AssumptionOptions read_assumption_options(const Section& root) {
  AssumptionOptions o;
  if (auto s = root.optional_sub("assumptions")) {
    o.sigma_grid = static_cast<int>(s->integer("sigma_grid", 101));
    if (o.sigma_grid < 2) s->fail("sigma_grid", "needs at least 2 samples");
    const std::string m = s->string("method", "auto");
    if (m == "radial")
      o.method = A3Method::RadialClosedForm;
    else if (m == "generic")
      o.method = A3Method::GenericDeterminant;
    else if (m != "auto")
      s->fail("method", "unknown method '" + m + "' (auto, radial, generic)");
    s->finish();
  }
  return o;
}

int cmd_resonance_scan(const Globals& g, const std::string& config) {
  ConfigFile cf(config);
  const Section root = cf.root();
  const PhaseTriple triple = read_phase(root.sub("phase"));
  ResonanceSearch rs;
  if (auto s = root.optional_sub("search")) {
    rs.R_lo = s->number("R_lo", rs.R_lo);
    rs.R_hi = s->number("R_hi", rs.R_hi);
    rs.lambda_lo = s->number("lambda_lo", rs.lambda_lo);
    rs.lambda_hi = s->number("lambda_hi", rs.lambda_hi);
    rs.grid = static_cast<int>(s->integer("grid", rs.grid));
    rs.residual_tol = s->number("residual_tol", rs.residual_tol);
    s->finish();
  }
  const AssumptionOptions ao = read_assumption_options(root);
  root.finish();

  const Target t = resolve(g.out, "report.json");
  OutputDir out(t.dir, "resonance-scan", cf.text(), g.seed, g.threads);
  json rep;
  rep["points"] = json::array();
  for (const auto& p : find_radial_resonances(triple, rs)) {
    json pj = point_json(p);
    pj["assumptions"] = report_json(check_assumptions(triple, p, ao.sigma_grid, 1e-9, ao.method));
    rep["points"].push_back(pj);
  }
  out.json(t.primary, rep);
  out.finish({{"points", rep["points"].size()}});
  std::cout << rep["points"].size() << " resonance(s) written to " << (t.dir / t.primary).string() << "\n";
  return kOk;
}

int cmd_assumptions(const Globals& g, const std::string& config) {
  ConfigFile cf(config);
  const Section root = cf.root();
  const Section ph = root.sub("phase");
  const PhaseTriple triple = read_phase(ph);
  const Section ps = root.sub("points");
  const auto pts = ps.rows("radial");
  ps.finish();
  const AssumptionOptions ao = read_assumption_options(root);
  root.finish();
  if (triple.dim() < 2) throw ConfigError(config + ": assumptions need d >= 2");
  std::vector<ResonancePoint> points;
  for (const auto& r : pts) {
    if (r.size() != 2) throw ConfigError(config + ": points.radial rows are [R, lambda]");
    ResonancePoint p;
    p.R = r[0];
    p.lambda = r[1];
    p.xi = Vec::Zero(triple.dim());
    p.xi(0) = p.R;
    p.eta = p.lambda * p.xi;
    p.residual_phi = std::abs(triple.phi(p.xi, p.eta));
    p.residual_grad = triple.grad_eta(p.xi, p.eta).norm();
    points.push_back(p);
  }

  const Target t = resolve(g.out, "assumptions.json");
  OutputDir out(t.dir, "assumptions", cf.text(), g.seed, g.threads);
  json rep;
  rep["points"] = json::array();
  bool all = true;
  for (const auto& p : points) {
    const AssumptionReport r = check_assumptions(triple, p, ao.sigma_grid, 1e-9, ao.method);
    all = all && r.all_pass();
    json pj = point_json(p);
    pj["assumptions"] = report_json(r);
    rep["points"].push_back(pj);
  }
  rep["all_pass"] = all;
  out.json(t.primary, rep);
  out.finish({{"all_pass", all}});
  std::cout << "assumptions " << (all ? "pass" : "fail") << " at " << points.size() << " point(s)\n";
  return kOk;
}

std::vector<std::string> axis_names(const std::string& prefix, int d) {
  std::vector<std::string> v;
  for (int k = 1; k <= d; ++k) v.push_back(prefix + "_" + std::to_string(k));
  return v;
}

int cmd_simulate(const Globals& g, const std::string& config) {
  ConfigFile cf(config);
  const Section root = cf.root();
  const PhaseTriple triple = read_phase(root.sub("phase"));
  const SpectralGrid grid = read_grid(root.sub("grid"));
  const int d = grid.dim();
  if (triple.dim() != d) throw ConfigError(config + ": phase.d and grid.d differ");
  const Section ts = root.sub("time");
  EvolveOptions eo;
  eo.t_max = ts.number("t_max");
  eo.steps = static_cast<int>(ts.integer("steps"));
  if (ts.has("snapshots")) eo.snapshots = ts.numbers("snapshots");
  ts.finish();
  if (!(eo.t_max > 0) || eo.steps < 1) throw ConfigError(config + ": time.t_max > 0 and time.steps >= 1 required");
  const Section ds = root.sub("data");
  const GaussianData fd = read_gaussian(ds.sub("f"), d), gd = read_gaussian(ds.sub("g"), d);
  ds.finish();
  const BilinearSymbol m = read_symbol(root.sub("symbol"), d);
  std::vector<Vec> points;
  bool limit = false;
  if (auto os = root.optional_sub("output")) {
    if (os->has("points"))
      for (const auto& r : os->rows("points")) {
        if (static_cast<int>(r.size()) != d) os->fail("points", "rows need d components");
        points.push_back(to_vec(r));
      }
    limit = os->boolean("limit", false);
    if (os->has("mode")) {
      const std::string mode = os->string("mode");
      if (mode == "direct")
        eo.mode = ProductMode::Direct;
      else if (mode == "separated")
        eo.mode = ProductMode::Separated;
      else
        os->fail("mode", "unknown mode '" + mode + "' (direct, separated)");
    }
    os->finish();
  }
  root.finish();

  auto as_field = [&](const GaussianData& gd_) {
    return SpectralField::from_function(grid, [&](const Vec& x) { return cplx(gd_(x)); });
  };
  const SpectralField F = as_field(fd), G = as_field(gd);
  const auto snaps = duhamel_evolve(triple, m, F, G, eo);
  std::vector<double> times = eo.snapshots.empty() ? std::vector<double>{eo.t_max} : eo.snapshots;

  const Target t = resolve(g.out, "h.csv");
  OutputDir out(t.dir, "simulate", cf.text(), g.seed, g.threads);
  std::vector<std::string> hdr{"t"};
  for (auto& s : axis_names("xi", d)) hdr.push_back(s);
  hdr.insert(hdr.end(), {"re", "im"});
  CsvWriter h = out.csv(t.primary, hdr);
  for (size_t k = 0; k < snaps.size(); ++k)
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      std::vector<double> row{times[k]};
      const Vec xi = grid.point(i);
      row.insert(row.end(), xi.data(), xi.data() + d);
      row.push_back(snaps[k].values(i).real());
      row.push_back(snaps[k].values(i).imag());
      h.row(row);
    }
  h.close();
  if (!points.empty()) {
    std::vector<std::string> uh{"t"};
    for (auto& s : axis_names("x", d)) uh.push_back(s);
    uh.insert(uh.end(), {"re", "im"});
    CsvWriter u = out.csv("u.csv", uh);
    for (size_t k = 0; k < snaps.size(); ++k) {
      const auto vals = evaluate_u(snaps[k], triple.a, times[k], points);
      for (size_t p = 0; p < points.size(); ++p) {
        std::vector<double> row{times[k]};
        row.insert(row.end(), points[p].data(), points[p].data() + d);
        row.push_back(vals[p].real());
        row.push_back(vals[p].imag());
        u.row(row);
      }
    }
  }
  json summary{{"snapshots", snaps.size()}, {"grid_points", grid.size()}};
  if (limit) {
    const ProfileLimit L = profile_limit(triple, m, F, G);
    std::vector<std::string> lh = axis_names("xi", d);
    lh.insert(lh.end(), {"re", "im", "converged", "extrapolation_error"});
    CsvWriter lc = out.csv("limit.csv", lh);
    long conv = 0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const Vec xi = grid.point(i);
      std::vector<double> row(xi.data(), xi.data() + d);
      row.push_back(L.h_inf.values(i).real());
      row.push_back(L.h_inf.values(i).imag());
      row.push_back(L.converged[i] ? 1.0 : 0.0);
      row.push_back(L.extrapolation_error(i));
      conv += L.converged[i];
      lc.row(row);
    }
    summary["limit_converged"] = conv;
  }
  out.finish(summary);
  std::cout << "simulated " << snaps.size() << " snapshot(s) on " << grid.size() << " frequencies\n";
  return kOk;
}

int cmd_profile(const Globals& g, const std::string& config) {
  ConfigFile cf(config);
  const Section root = cf.root();
  const PhaseTriple triple = read_phase(root.sub("phase"));
  const int d = triple.dim();
  const Section ds = root.sub("data");
  const GaussianData fd = read_gaussian(ds.sub("f"), d), gd = read_gaussian(ds.sub("g"), d);
  ds.finish();
  const Section ps = root.sub("profile");
  std::vector<Vec> xis;
  for (const auto& r : ps.rows("xi")) {
    if (static_cast<int>(r.size()) != d) ps.fail("xi", "rows need d components");
    xis.push_back(to_vec(r));
  }
  const std::vector<double> times = ps.numbers("times");
  const double tail = ps.number("tail_start", 2000.0);
  ps.finish();
  root.finish();
  for (size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ConfigError(config + ": profile.times must increase");

  GaussianInteraction gi(triple, fd, gd);
  const Target t = resolve(g.out, "profile.csv");
  OutputDir out(t.dir, "profile", cf.text(), g.seed, g.threads);
  std::vector<std::string> hdr = axis_names("xi", d);
  hdr.insert(hdr.end(), {"t", "re", "im", "diff"});
  CsvWriter pc = out.csv(t.primary, hdr);
  std::vector<std::string> lh = axis_names("xi", d);
  lh.insert(lh.end(), {"re", "im", "resonance_function"});
  CsvWriter lc = out.csv("limit.csv", lh);
  json rates = json::array();
  for (const Vec& xi : xis) {
    const auto s = gi.series(xi, times, tail);
    std::vector<double> diff;
    for (size_t k = 0; k < times.size(); ++k) {
      diff.push_back(std::abs(s.h[k] - s.h_inf));
      std::vector<double> row(xi.data(), xi.data() + d);
      row.insert(row.end(), {times[k], s.h[k].real(), s.h[k].imag(), diff.back()});
      pc.row(row);
    }
    std::vector<double> row(xi.data(), xi.data() + d);
    row.insert(row.end(), {s.h_inf.real(), s.h_inf.imag(), gi.resonance_function(xi)});
    lc.row(row);
    json rj{{"xi", vec_json(xi)}};
    if (times.size() >= 5) {
      const RateFit rf = convergence_rate(times, diff);
      rj["rate"] = rf.rate;
      rj["rms"] = rf.rms;
      rj["monotone"] = rf.monotone;
    }
    rates.push_back(rj);
  }
  pc.close();
  lc.close();
  out.json("report.json", {{"rates", rates}});
  out.finish({{"frequencies", xis.size()}});
  std::cout << "profile series for " << xis.size() << " frequenc" << (xis.size() == 1 ? "y" : "ies") << "\n";
  return kOk;
}

struct JRange {
  int lo = -8, hi = -2;
};

JRange parse_jrange(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw ConfigError("--j-range expects lo..hi, got '" + s + "'");
  try {
    JRange r{std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    if (r.lo > r.hi || r.hi > 0) throw ConfigError("--j-range needs lo <= hi <= 0");
    return r;
  } catch (const std::logic_error&) {
    throw ConfigError("--j-range expects integers lo..hi, got '" + s + "'");
  }
}

int cmd_split_study(const Globals& g, const std::string& config, const std::string& jrange, double samples_flag) {
  ConfigFile cf(config);
  const Section root = cf.root();
  const PhaseTriple triple = read_phase(root.sub("phase"));
  const int d = triple.dim();
  const Section ss = root.sub("split");
  const Region region = read_region(ss.string("region", "omega1"), ss, "region");
  const GradientSelector sel = read_selector(ss.string("selector", "full"), ss, "selector");
  JRange jr{static_cast<int>(ss.integer("j_min", -8)), static_cast<int>(ss.integer("j_max", -2))};
  long samples = ss.integer("samples", 1000000);
  const Vec center = to_vec(ss.numbers("center"));
  const Vec half = to_vec(ss.numbers("half_width"));
  Vec scaling = Vec::Zero(2 * d), floor = Vec::Zero(2 * d);
  if (ss.has("scaling")) scaling = to_vec(ss.numbers("scaling"));
  if (ss.has("floor")) floor = to_vec(ss.numbers("floor"));
  if (center.size() != 2 * d || half.size() != 2 * d || scaling.size() != 2 * d || floor.size() != 2 * d)
    ss.fail("center", "center, half_width, scaling and floor need 2d components (xi then eta)");
  ss.finish();
  root.finish();
  if (!jrange.empty()) jr = parse_jrange(jrange);
  if (samples_flag > 0) samples = static_cast<long>(samples_flag);
  if (jr.lo > jr.hi || jr.hi > 0) throw ConfigError(config + ": split needs j_min <= j_max <= 0");

  const Target t = resolve(g.out, "shells.csv");
  OutputDir out(t.dir, "split-study", cf.text(), g.seed, g.threads);
  CsvWriter c = out.csv(t.primary, {"j", "volume", "stderr", "hits", "samples", "eta_extent", "normalized"});
  for (int j = jr.lo; j <= jr.hi; ++j) {
    ShellBox box;
    Vec w(2 * d);
    // half-width floor + half * 2^{j scaling} per coordinate
    for (int k = 0; k < 2 * d; ++k) w(k) = floor(k) + half(k) * std::pow(2.0, j * scaling(k));
    box.lo = center - w;
    box.hi = center + w;
    const ShellVolume v = shell_volume(triple, region, j, samples, g.seed, box, {}, sel);
    c.row(std::vector<double>{double(j), v.volume, v.stderr_, double(v.hits), double(v.samples), v.eta_extent,
                              v.volume / std::pow(2.0, j * (d + 1))});
  }
  c.close();
  out.finish({{"j_min", jr.lo}, {"j_max", jr.hi}, {"samples", samples}, {"region", to_string(region)}});
  std::cout << "shell volumes for j in [" << jr.lo << ", " << jr.hi << "]\n";
  return kOk;
}

struct WWOptions {
  double g = 1.0, sigma = 1.0;
  std::string scan = "all";
  bool decay = false;
  int decay_points = 14;
  double t_min = 20.0, t_max = 500.0;
};

int cmd_waterwaves(const Globals& gl, WWOptions o, const std::string& config) {
  std::string text = "g=" + format_number(o.g) + ";sigma=" + format_number(o.sigma) + ";scan=" + o.scan;
  double lmin = 0.05, lmax = 20.0;
  int npts = 400;
  DecayScenarioOptions dso;
  if (!config.empty()) {
    ConfigFile cf(config);
    text += "\n" + cf.text();
    const Section root = cf.root();
    const Section s = root.sub("waterwaves");
    o.g = s.number("g", o.g);
    o.sigma = s.number("sigma", o.sigma);
    o.scan = s.string("scan", o.scan);
    lmin = s.number("lambda_min", lmin);
    lmax = s.number("lambda_max", lmax);
    npts = static_cast<int>(s.integer("points", npts));
    s.finish();
    if (auto dsec = root.optional_sub("decay")) {
      o.decay = dsec->boolean("enabled", true);
      o.decay_points = static_cast<int>(dsec->integer("points", o.decay_points));
      o.t_min = dsec->number("t_min", o.t_min);
      o.t_max = dsec->number("t_max", o.t_max);
      dso.width = dsec->number("width", dso.width);
      dso.amp_threshold = dsec->number("amp_threshold", dso.amp_threshold);
      dso.xi_radius = dsec->number("xi_radius", dso.xi_radius);
      dsec->finish();
    }
    root.finish();
  }
  if (!(o.g > 0 && o.sigma > 0)) throw ConfigError("waterwaves needs g > 0 and sigma > 0");
  if (!(lmin > 0 && lmax > lmin && npts >= 2)) throw ConfigError("waterwaves needs 0 < lambda_min < lambda_max");
  std::vector<WWKind> kinds;
  if (o.scan == "all")
    kinds = {WWKind::PlusPlus, WWKind::PlusMinus, WWKind::MinusMinus};
  else
    try {
      kinds = {parse_ww_kind(o.scan)};
    } catch (const DomainError& e) {
      throw ConfigError(std::string("--scan: ") + e.what());
    }

  const WaterWaveScenario ww(o.g, o.sigma);
  const Landmarks& L = ww.marks();
  const std::vector<double> grid = logspace(lmin, lmax, npts);
  const Target t = resolve(gl.out, "ww.json");
  OutputDir out(t.dir, "waterwaves", text, gl.seed, gl.threads);
  json rep;
  rep["g"] = o.g;
  rep["sigma"] = o.sigma;
  rep["landmarks"] = {{"lambda0", L.lambda0}, {"lambda1", L.lambda1}, {"lambda2", L.lambda2}, {"c0", L.c0}};
  std::map<WWKind, InteractionScan> scans;
  for (WWKind k : kinds) {
    scans.emplace(k, interaction_scan(k, o.g, o.sigma, grid));
    const auto& s = scans.at(k);
    json sj{{"sign_ok", s.sign_ok}, {"extreme", s.extreme}, {"trimmed", s.trimmed}, {"log", s.log}};
    if (k == WWKind::PlusMinus) {
      sj["monotone_ok"] = s.monotone_ok;
      sj["f_at_lambda0"] = s.f_at_lambda0;
    }
    if (k == WWKind::MinusMinus) {
      sj["branch_zero"] = s.branch_zero;
      sj["branch_residual"] = s.branch_residual;
    }
    rep["scans"][to_string(k)] = sj;
  }
  const InequalityMargins im = verify_inequalities(o.g, o.sigma, grid);
  rep["inequalities"] = {{"la", im.la_ok},
                         {"eq1", im.eq1_ok},
                         {"eq2", im.eq2_ok},
                         {"res", im.res_ok},
                         {"constant_sum", im.constant_sum},
                         {"constant_pair", im.constant_pair},
                         {"constants_ok", im.constants_ok}};
  const GenericCertificate gc = certify_generic(o.g, o.sigma);
  rep["certificate"] = {{"point", point_json(gc.point)},
                        {"radial", report_json(gc.radial)},
                        {"generic", report_json(gc.generic)},
                        {"a3_agreeing", gc.agreeing},
                        {"a3_samples", gc.samples},
                        {"pass", gc.pass()}};

  CsvWriter c = out.csv("ww_curves.csv", {"lambda", "alpha", "f_plusplus", "f_plusminus", "f_minusminus", "margin_la",
                                          "margin_eq1", "margin_eq2", "margin_res"});
  const double nan = std::nan("");
  for (size_t k = 0; k < im.lambda.size(); ++k) {
    const double l = im.lambda[k];
    auto val = [&](WWKind kind) {
      auto it = scans.find(kind);
      if (it == scans.end()) return nan;
      const auto& s = it->second;
      const auto p = std::find(s.lambda.begin(), s.lambda.end(), l);
      return p == s.lambda.end() ? nan : s.f[p - s.lambda.begin()];
    };
    c.row(std::vector<double>{l, ww.alpha(l), val(WWKind::PlusPlus), val(WWKind::PlusMinus), val(WWKind::MinusMinus),
                              im.la[k], im.eq1[k], im.eq2[k], im.res[k]});
  }
  c.close();

  if (o.decay) {
    if (!(o.t_min > 1 && o.t_max > o.t_min && o.decay_points >= 10))
      throw ConfigError("decay needs 1 < t_min < t_max and at least 10 points");
    const LatticeInteraction li(ww_decay_setup(o.g, o.sigma, dso));
    const std::vector<double> mus{0.0, 0.3, -0.3, 0.5, -0.5};
    std::vector<DecaySeries> series(mus.size());
    CsvWriter dc = out.csv("decay.csv", {"t", "mu", "abs_u"});
    for (double tt : logspace(o.t_min, o.t_max, o.decay_points)) {
      const LatticeProfile p = li.profile(tt);
      std::vector<Vec> x;
      for (double mu : mus) x.push_back(tt * ww_ray_point(o.g, o.sigma, mu));
      const auto u = li.evaluate(p, x);
      for (size_t k = 0; k < mus.size(); ++k) {
        series[k].t.push_back(tt);
        series[k].value.push_back(std::abs(u[k]));
        dc.row(std::vector<double>{tt, mus[k], std::abs(u[k])});
      }
    }
    dc.close();
    json fits = json::array();
    for (size_t k = 0; k < mus.size(); ++k) {
      const DecayFit f = fit_decay(series[k]);
      fits.push_back({{"mu", mus[k]},
                      {"model", to_string(f.model)},
                      {"gamma", f.gamma},
                      {"gamma_power", f.gamma_power},
                      {"rms_power", f.rms_power},
                      {"rms_log", f.rms_log},
                      {"margin", f.margin},
                      {"decisive", f.decisive}});
    }
    rep["decay"] = fits;
  }

  out.json(t.primary, rep);
  out.finish({{"lambda2", L.lambda2}, {"certificate", gc.pass()}});
  std::cout << "lambda0 = " << format_number(L.lambda0) << ", lambda2 = " << format_number(L.lambda2)
            << ", certificate " << (gc.pass() ? "pass" : "fail") << "\n";
  return kOk;
}

std::map<std::string, double> parse_params(const std::string& s) {
  std::map<std::string, double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--params expects key=value pairs, got '" + item + "'");
    try {
      size_t used = 0;
      const std::string v = item.substr(eq + 1);
      out[item.substr(0, eq)] = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::logic_error&) {
      throw ConfigError("--params: '" + item + "' is not numeric");
    }
  }
  return out;
}

int cmd_model_integrals(const Globals& g, const std::string& which, const std::string& params) {
  auto P = parse_params(params);
  std::set<std::string> used;
  auto get = [&](const std::string& k, double fallback) {
    used.insert(k);
    auto it = P.find(k);
    return it == P.end() ? fallback : it->second;
  };
  const cplx I(0, 1);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> hdr;
  if (which == "F") {
    hdr = {"z", "oracle_re", "oracle_im", "asymptotic_re", "asymptotic_im", "discrepancy"};
    const double lo = get("z_min", 0.1), hi = get("z_max", 100.0);
    const int n = static_cast<int>(get("points", 40));
    if (!(lo > 0 && hi > lo && n >= 2)) throw ConfigError("F needs 0 < z_min < z_max and points >= 2");
    for (double z : logspace(lo, hi, n)) {
      const cplx v = exp_integral_F(z), a = std::exp(I * z) * (I / z + 1.0 / (z * z));
      rows.push_back({z, v.real(), v.imag(), a.real(), a.imag(), std::abs(v - a)});
    }
  } else if (which == "Z") {
    hdr = {"t", "u", "oracle_re", "oracle_im", "asymptotic_re", "asymptotic_im", "discrepancy"};
    const double u = get("u", 0.0), lo = get("t_min", 10.0), hi = get("t_max", 1e6);
    const int n = static_cast<int>(get("points", 11));
    if (!(lo > 1 && hi > lo && n >= 2)) throw ConfigError("Z needs 1 < t_min < t_max and points >= 2");
    for (double t : logspace(lo, hi, n)) {
      const cplx v = model_Z(t, u);
      // log t for t|u| small; -log|u| - gamma_E +- i pi/2 once t|u| is large
      const cplx a = t * std::abs(u) <= 1.0
                         ? cplx(std::log(t))
                         : cplx(-std::log(std::abs(u)) - 0.57721566490153286, u > 0 ? kPi / 2 : -kPi / 2);
      rows.push_back({t, u, v.real(), v.imag(), a.real(), a.imag(), std::abs(v - a)});
    }
  } else if (which == "Y") {
    hdr = {"u", "oracle_re", "oracle_im", "asymptotic_re", "asymptotic_im", "discrepancy"};
    const double lo = get("u_min", -50.0), hi = get("u_max", 50.0);
    const int n = static_cast<int>(get("points", 101));
    if (!(hi > lo && n >= 2)) throw ConfigError("Y needs u_min < u_max and points >= 2");
    for (int k = 0; k < n; ++k) {
      const double u = lo + (hi - lo) * k / (n - 1.0);
      const cplx v = model_Y(u);
      // sqrt(pi/|u|) e^{+- i pi/4} at large |u|
      const cplx a = std::abs(u) >= 1 ? std::sqrt(kPi / std::abs(u)) * std::exp(I * (u > 0 ? kPi / 4 : -kPi / 4))
                                      : cplx(std::nan(""), std::nan(""));
      rows.push_back({u, v.real(), v.imag(), a.real(), a.imag(), std::abs(v - a)});
    }
  } else if (which == "chardonneret") {
    hdr = {"t", "alpha", "oracle_re", "oracle_im", "asymptotic_re", "asymptotic_im", "discrepancy"};
    const double s0 = get("sigma0", 0.0), k = get("k", 1.0), sup = get("support", 1.0);
    const double lo = get("t_min", 100.0), hi = get("t_max", 1e6);
    const int n = static_cast<int>(get("points", 5));
    if (!(k > 0 && sup > 0 && lo >= 10 && hi > lo && n >= 2))
      throw ConfigError("chardonneret needs k > 0, support > 0, 10 <= t_min < t_max");
    // zeta(sigma) = k (sigma - sigma0)^2 / 2
    ScalarPhase z{[=](double s) { return 0.5 * k * (s - s0) * (s - s0); }, [=](double s) { return k * (s - s0); },
                  [=](double) { return k; }};
    Cutoff chi{[=](double s) { return 1.0 - mollifier_step(s / sup); }, sup};
    for (double t : logspace(lo, hi, n)) {
      const ChardonneretResult r = chardonneret(z, chi, t);
      rows.push_back({t, r.alpha, r.oracle.real(), r.oracle.imag(), r.asymptotic.real(), r.asymptotic.imag(),
                      r.discrepancy()});
    }
  } else {
    throw ConfigError("--which must be F, Z, Y or chardonneret");
  }
  for (const auto& [key, v] : P)
    if (!used.count(key)) throw ConfigError("--params: unknown key '" + key + "' for " + which);

  const Target t = resolve(g.out, "model_" + which + ".csv");
  OutputDir out(t.dir, "model-integrals", "which=" + which + ";params=" + params, g.seed, g.threads);
  CsvWriter c = out.csv(t.primary, hdr);
  for (const auto& r : rows) c.row(r);
  c.close();
  out.finish({{"which", which}, {"rows", rows.size()}});
  std::cout << rows.size() << " rows written to " << (t.dir / t.primary).string() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"rlab: space-time resonance laboratory"};
  app.set_version_flag("--version", std::string(RLAB_VERSION));
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--out", g.out, "output directory, or a .json/.csv file inside it");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker cap")->check(CLI::PositiveNumber);
  app.add_option("--check", g.check, "re-validate manifests under a directory and exit");

  std::string config, jrange, which, params;
  double samples = -1;
  WWOptions wo;
  auto* rscan = app.add_subcommand("resonance-scan", "radial resonances and assumption margins");
  rscan->add_option("--config", config)->required();
  auto* assum = app.add_subcommand("assumptions", "assumption margins at given radial points");
  assum->add_option("--config", config)->required();
  auto* sim = app.add_subcommand("simulate", "Duhamel evolution of the profile on a spectral grid");
  sim->add_option("--config", config)->required();
  auto* prof = app.add_subcommand("profile", "closed-form profile series and limits");
  prof->add_option("--config", config)->required();
  auto* split = app.add_subcommand("split-study", "Monte-Carlo shell volumes");
  split->add_option("--config", config)->required();
  split->add_option("--j-range", jrange, "lo..hi");
  split->add_option("--samples", samples);
  auto* wwc = app.add_subcommand("waterwaves", "landmarks, interaction scans and certificates");
  wwc->add_option("--g", wo.g);
  wwc->add_option("--sigma", wo.sigma);
  wwc->add_option("--scan", wo.scan, "all, ++, +- or --");
  wwc->add_option("--config", config);
  wwc->add_flag("--decay", wo.decay, "run the lattice decay scenario");
  wwc->add_option("--decay-points", wo.decay_points);
  auto* mi = app.add_subcommand("model-integrals", "F, Z, Y and the chardonneret integral");
  mi->add_option("--which", which)->required();
  mi->add_option("--params", params, "comma separated key=value");
  app.require_subcommand(0, 1);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  Eigen::setNbThreads(g.threads);

  try {
    if (!g.check.empty()) {
      const CheckResult r = check_manifests(g.check);
      for (const auto& p : r.problems) std::cerr << "check: " << p << "\n";
      std::cout << r.manifests << " manifest(s), " << r.files << " file(s): " << (r.ok() ? "ok" : "FAILED") << "\n";
      return r.ok() ? kOk : kRefusal;
    }
    if (rscan->parsed()) return cmd_resonance_scan(g, config);
    if (assum->parsed()) return cmd_assumptions(g, config);
    if (sim->parsed()) return cmd_simulate(g, config);
    if (prof->parsed()) return cmd_profile(g, config);
    if (split->parsed()) return cmd_split_study(g, config, jrange, samples);
    if (wwc->parsed()) return cmd_waterwaves(g, wo, config);
    if (mi->parsed()) return cmd_model_integrals(g, which, params);
    std::cout << app.help();
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefusal;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kRefusal;
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kRefusal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRefusal;
  }
}

}  // namespace rlab::cli
