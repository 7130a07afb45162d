#include "rlab/cli/output.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string err, out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("rlab_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

Run tool(const std::string& args) {
  const fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
  const std::string cmd = std::string("\"") + RLAB_TOOL + "\" " + args + " >\"" + o.string() + "\" 2>\"" +
                          e.string() + "\"";
  const int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(e), slurp(o)};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

const std::string kSim = R"(
[phase]
d = 2
a = { kind = "power", p = 2, sign = -1 }
b = { kind = "power", p = 2 }
c = { kind = "power", p = 2 }

[grid]
d = 2
n = 24
xi_max = 5.0

[time]
t_max = 0.5
steps = 100

[data.f]
center = [0.5, 0.0]
width = 0.3

[data.g]
center = [0.0, 0.5]
width = 0.3

[symbol]
kind = "constant"
)";

std::string without(std::string text, const std::string& block) {
  const auto p = text.find(block);
  REQUIRE(p != std::string::npos);
  return text.erase(p, block.size());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("content hash and number format") {
    CHECK(rlab::cli::content_hash("") == "cbf29ce484222325");
    CHECK(rlab::cli::content_hash("a") == "af63dc4c8601ec8c");
    CHECK(rlab::cli::format_number(0.1) == "0.10000000000000001");
    CHECK(rlab::cli::format_number(-2) == "-2");
  }

  TEST_CASE("config errors name the offending section or key") {
    const auto nogrid = write_config("nogrid.toml", without(kSim, "[grid]\nd = 2\nn = 24\nxi_max = 5.0\n"));
    Run r = tool("simulate --config \"" + nogrid.string() + "\" --out \"" + (scratch() / "x").string() + "\"");
    CHECK(r.code == 2);
    CHECK(r.err.find("[grid]") != std::string::npos);

    const auto unk = write_config("unknown.toml", kSim + "\n[extra]\nfoo = 1\n");
    r = tool("simulate --config \"" + unk.string() + "\" --out \"" + (scratch() / "x").string() + "\"");
    CHECK(r.code == 2);
    CHECK(r.err.find("extra") != std::string::npos);

    const auto typo = write_config("typo.toml", std::regex_replace(kSim, std::regex("xi_max"), "ximax"));
    r = tool("simulate --config \"" + typo.string() + "\" --out \"" + (scratch() / "x").string() + "\"");
    CHECK(r.code == 2);
    CHECK(r.err.find("xi_max") != std::string::npos);

    r = tool("simulate --config \"" + (scratch() / "absent.toml").string() + "\"");
    CHECK(r.code == 2);
    r = tool("no-such-command");
    CHECK(r.code == 2);
  }

  TEST_CASE("numerical refusal exits with 1") {
    const auto few = write_config("few.toml", std::regex_replace(kSim, std::regex("steps = 100"), "steps = 2"));
    const Run r = tool("simulate --config \"" + few.string() + "\" --out \"" + (scratch() / "few").string() + "\"");
    CHECK(r.code == 1);
    CHECK(r.err.find("refused") != std::string::npos);
  }

  TEST_CASE("reruns are byte identical and manifests validate") {
    const auto cfg = write_config("sim.toml", kSim);
    const fs::path a = scratch() / "run_a", b = scratch() / "run_b";
    REQUIRE(tool("simulate --config \"" + cfg.string() + "\" --out \"" + a.string() + "\"").code == 0);
    REQUIRE(tool("simulate --config \"" + cfg.string() + "\" --out \"" + b.string() + "\"").code == 0);
    const std::string ha = slurp(a / "h.csv");
    CHECK(ha.rfind("t,xi_1,xi_2,re,im\n", 0) == 0);
    CHECK(ha == slurp(b / "h.csv"));

    Run r = tool("--check \"" + scratch().string() + "\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("ok") != std::string::npos);

    std::ofstream(a / "h.csv", std::ios::app) << "tampered\n";
    r = tool("--check \"" + a.string() + "\"");
    CHECK(r.code == 1);
    CHECK(r.err.find("hash mismatch") != std::string::npos);
  }

  TEST_CASE("waterwaves report") {
    const fs::path out = scratch() / "ww";
    const Run r = tool("waterwaves --config \"" + std::string(RLAB_CONFIGS) + "/waterwaves.toml\" --out \"" +
                       out.string() + "\"");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(out / "ww.json"));
    CHECK(j["landmarks"]["lambda2"].get<double>() == doctest::Approx(0.707107).epsilon(1e-6));
    CHECK(j["landmarks"]["lambda0"].get<double>() == doctest::Approx(0.393320).epsilon(1e-5));
    CHECK(j["scans"]["--"]["branch_zero"].get<double>() == doctest::Approx(0.70710678118654752).epsilon(1e-8));
    CHECK(j["certificate"]["pass"].get<bool>());
    CHECK(j["inequalities"]["constants_ok"].get<bool>());
    const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(m["command"] == "waterwaves");
    CHECK(m["files"].size() == 2);
  }
}
