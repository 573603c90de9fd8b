#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "doctest.h"
#include "zeroprop/optimizer.hpp"

using namespace zeroprop;
using namespace zeroprop::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "zeroprop");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> parse_machine(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("zeroprop_cli_" + std::to_string(counter_++) + "_" +
                                                 std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

nlohmann::json with_search(const std::string& target, nlohmann::json bounds, int budget) {
  auto doc = default_config_json();
  doc["search"] = {{"target", target}, {"bounds", bounds}, {"budget", budget}, {"restarts", 4}, {"seed", 1}};
  return doc;
}

}  // namespace

TEST_CASE("reproduce with built-in parameters") {
  const auto r = run_cli({"reproduce"});
  CHECK(r.code == 0);
  CHECK(r.out.find("reproduce: PASS") != std::string::npos);
  CHECK(r.out.find("1.530316") != std::string::npos);
  for (const char* q : {"c ", "nu ", "c1 ", "kappa ", "d ", "s ", "d_grh ", "s_grh "}) {
    CHECK(r.out.find(q) != std::string::npos);
  }
}

TEST_CASE("reproduce machine output") {
  const auto r = run_cli({"--machine", "reproduce"});
  CHECK(r.code == 0);
  const auto kv = parse_machine(r.out);
  const std::vector<std::string> keys = {"c", "nu", "c1", "kappa", "d", "s", "d_grh", "s_grh"};
  for (const auto& k : keys) {
    REQUIRE(kv.count(k) == 1);
    CHECK(kv.at("verdict." + k) == "PASS");
    const std::string& v = kv.at(k);
    CHECK(v.find(',') == std::string::npos);
    std::size_t digits = 0;
    for (char ch : v) digits += (ch >= '0' && ch <= '9');
    CHECK(digits >= 17);
  }
  CHECK(kv.size() == 2 * keys.size() + 1);
  CHECK(kv.at("verdict") == "PASS");
  CHECK(std::stod(kv.at("c")) == doctest::Approx(1.2301085737954217).epsilon(1e-12));
}

TEST_CASE("reproduce away from the reference point") {
  const auto r = run_cli({"--machine", "reproduce", "--set", "section4.R=0.3"});
  CHECK(r.code == 0);
  const auto kv = parse_machine(r.out);
  CHECK(kv.at("verdict.c") == "N/A");
  CHECK(kv.at("verdict.nu") == "N/A");
  CHECK(kv.at("verdict.d") == "N/A");
  CHECK(kv.at("verdict.c1") == "PASS");
  CHECK(kv.at("verdict.kappa") == "PASS");
  CHECK(std::stod(kv.at("c")) != doctest::Approx(1.2301085737954217));
}

TEST_CASE("reproduce failure paths") {
  CHECK(run_cli({"reproduce", "--corrupt-reference"}).code == 1);
  const auto bad = run_cli({"reproduce", "--set", "section4.nope=1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("section4.nope") != std::string::npos);
  CHECK(run_cli({"reproduce", "--set", "section5.R=-1"}).code == 2);
  CHECK(run_cli({"reproduce", "--config", "/nonexistent/config.json"}).code == 2);
}

TEST_CASE("eval") {
  TempDir dir;
  const auto ref = dir.write("ref.json", default_config_json().dump());
  const auto c = run_cli({"--machine", "eval", "--which", "c", "--config", ref});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("c=1.2301", 0) == 0);
  CHECK(parse_machine(c.out).size() == 2);

  const auto c1 = run_cli({"--machine", "eval", "--which", "c1", "--config", ref});
  CHECK(c1.code == 0);
  CHECK(parse_machine(c1.out).count("kappa") == 1);

  auto unit = default_config_json();
  unit["given"] = {{"c", 1}, {"c1", 1}};
  const auto bounds = run_cli({"--machine", "eval", "--which", "bounds", "--config", dir.write("unit.json", unit.dump())});
  CHECK(bounds.code == 0);
  const auto kv = parse_machine(bounds.out);
  CHECK(std::stod(kv.at("d")) == 1);
  CHECK(std::stod(kv.at("s")) == 1);
  CHECK(std::stod(kv.at("d_grh")) == 1);
  CHECK(std::stod(kv.at("s_grh")) == 1);

  CHECK(run_cli({"eval", "--which", "c2", "--config", ref}).code == 2);
  CHECK(run_cli({"eval", "--which", "c"}).code == 2);
}

TEST_CASE("eval rejects constraint violations with the identity name") {
  TempDir dir;
  auto doc = default_config_json();
  doc["section5"].erase("q_linear");
  doc["section5"].erase("q_sym");
  doc["section5"]["q_raw"] = {"1", "0.5", "0.25"};
  const auto r = run_cli({"eval", "--which", "c1", "--config", dir.write("bad.json", doc.dump())});
  CHECK(r.code == 2);
  CHECK(r.err.find("Q'(x)=Q'(1-x)") != std::string::npos);
  CHECK(r.err.find("section5") != std::string::npos);

  auto p = default_config_json();
  p["section4"].erase("p1_shape");
  p["section4"]["p1_raw"] = {"0", "0.5"};
  const auto rp = run_cli({"eval", "--which", "c", "--config", dir.write("badp.json", p.dump())});
  CHECK(rp.code == 2);
  CHECK(rp.err.find("P(1)=1") != std::string::npos);

  const auto syntax = run_cli({"eval", "--which", "c", "--config", dir.write("syntax.json", "{\n  \"theta\": 1,\n  oops\n}")});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("line 3") != std::string::npos);
}

TEST_CASE("raw coefficients are accepted when they satisfy the constraints") {
  TempDir dir;
  auto doc = default_config_json();
  doc["section5"].erase("q_linear");
  doc["section5"].erase("q_sym");
  const Poly q = expand_twist({parse_decimal("-0.673"), {parse_decimal("0.369"), parse_decimal("-4.635")}});
  nlohmann::json raw = nlohmann::json::array();
  for (const auto& c : q.coeffs()) raw.push_back(rational_text(c));
  doc["section5"]["q_raw"] = raw;
  const auto from_raw = run_cli({"--machine", "eval", "--which", "c1", "--config", dir.write("raw.json", doc.dump())});
  const auto from_shape = run_cli({"--machine", "eval", "--which", "c1", "--config", dir.write("ref.json", default_config_json().dump())});
  CHECK(from_raw.code == 0);
  CHECK(from_raw.out == from_shape.out);
}

TEST_CASE("optimize") {
  TempDir dir;
  const auto one = dir.write("one.json", with_search("maximize_kappa", {{"R", {0.5, 1}}, {"delta", {0.5, 1}}}, 1).dump());
  const auto seed = run_cli({"--machine", "optimize", "--config", one});
  CHECK(seed.code == 0);
  const auto seed_kv = parse_machine(seed.out);
  CHECK(seed_kv.at("evaluations") == "1");

  const auto cfg = dir.write("k.json", with_search("maximize_kappa", {{"R", {0.5, 1}}, {"delta", {0.5, 1}}}, 2000).dump());
  const auto emitted = dir.file("best.json");
  const auto r = run_cli({"--machine", "optimize", "--config", cfg, "--emit-config", emitted});
  CHECK(r.code == 0);
  const auto kv = parse_machine(r.out);
  const double kappa = std::stod(kv.at("kappa"));
  CHECK(kappa >= 0.93828 - 5e-4);
  CHECK(kappa >= std::stod(seed_kv.at("kappa")));

  // Round trip: the emitted config re-evaluates to the printed objective.
  const auto again = run_cli({"--machine", "eval", "--which", "c1", "--config", emitted});
  CHECK(again.code == 0);
  CHECK(std::fabs(std::stod(parse_machine(again.out).at("kappa")) - kappa) <= 1e-12);
  const auto inline_cfg = parse_config(nlohmann::json::parse(kv.at("config")));
  CHECK(std::fabs(kappa_bound(c1_value(inline_cfg.section5), inline_cfg.section5.R) - kappa) <= 1e-12);

  const auto human = run_cli({"optimize", "--config", cfg});
  CHECK(human.code == 0);
  CHECK(human.out.find("best point") != std::string::npos);
  CHECK(human.out.find("\"section5\"") != std::string::npos);

  const auto grid = run_cli({"--machine", "optimize", "--config", cfg, "--grid", "1"});
  CHECK(grid.code == 0);
  CHECK(parse_machine(grid.out).at("evaluations") == "5");

  CHECK(run_cli({"optimize", "--config", dir.write("nosearch.json", default_config_json().dump())}).code == 2);
}

TEST_CASE("optimize round trip for nu") {
  TempDir dir;
  const auto cfg = dir.write("n.json", with_search("minimize_nu", {{"r", {0.8, 2}}, {"R", {0.3, 1}}}, 500).dump());
  const auto emitted = dir.file("best.json");
  const auto r = run_cli({"--machine", "optimize", "--config", cfg, "--emit-config", emitted});
  CHECK(r.code == 0);
  const double nu = std::stod(parse_machine(r.out).at("nu"));
  const auto again = run_cli({"--machine", "eval", "--which", "c", "--config", emitted});
  CHECK(std::fabs(std::stod(parse_machine(again.out).at("nu")) - nu) <= 1e-12);
}

TEST_CASE("global seed flag reaches the search") {
  TempDir dir;
  const auto cfg = dir.write("k.json", with_search("maximize_kappa", {{"R", {0.5, 1}}, {"delta", {0.5, 1}}}, 300).dump());
  const auto a = run_cli({"--machine", "--seed", "5", "optimize", "--config", cfg});
  const auto b = run_cli({"--machine", "--seed", "5", "optimize", "--config", cfg});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("out file duplicates machine output") {
  TempDir dir;
  const auto path = dir.file("out.txt");
  const auto r = run_cli({"--out", path, "reproduce"});
  CHECK(r.code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const auto kv = parse_machine(text.str());
  CHECK(kv.count("kappa") == 1);
  CHECK(r.out.find("kappa=") == std::string::npos);
}

TEST_CASE("selfcheck") {
  const auto r = run_cli({"selfcheck"});
  CHECK(r.code == 0);
  CHECK(r.out.find("selfcheck: PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"--seed", "x", "reproduce"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("config parsing") {
  const RunConfig d = default_config();
  CHECK(d.section4.R == 0.617);
  CHECK(d.section5.delta == 0.771);
  CHECK(d.section4.p2_shape.coeffs[0] == parse_decimal("0.492"));
  CHECK_FALSE(d.search.has_value());

  auto doc = default_config_json();
  apply_override(doc, "section5.R=0.8");
  apply_override(doc, "section4.p1_shape=[\"0.1\"]");
  const RunConfig o = parse_config(doc);
  CHECK(o.section5.R == 0.8);
  CHECK(o.section4.p1_shape.coeffs.size() == 1);
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);

  // to_json / parse_config round trip is exact.
  const RunConfig back = parse_config(to_json(d));
  CHECK(back.section5.q_shape.sym_coeffs == d.section5.q_shape.sym_coeffs);
  CHECK(back.section4.r == d.section4.r);

  CHECK(rational_text(parse_decimal("-0.392")) == "-0.392");
  CHECK(rational_text(Rational(1, 3)) == "1/3");

  auto bad_theta = default_config_json();
  bad_theta["theta"] = 1.5;
  CHECK_THROWS_AS(parse_config(bad_theta), ConfigError);
  auto bad_target = with_search("maximize_nu", {{"R", {0.5, 1}}}, 10);
  CHECK_THROWS_AS(parse_config(bad_target), ConfigError);
  auto bad_bound = with_search("maximize_kappa", {{"r", {0.5, 1}}}, 10);
  CHECK_THROWS_AS(make_search_spec(parse_config(bad_bound)), ConfigError);
}
