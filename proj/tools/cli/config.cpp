#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace zeroprop::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(join(where, key), "unknown key");
  }
}

const json& require_object(const json& v, const std::string& field) {
  if (!v.is_object()) throw ConfigError(field, "expected an object");
  return v;
}

double scalar(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return out;
  }
  throw ConfigError(field, "expected a decimal number");
}

Rational exact(const json& v, const std::string& field) {
  try {
    if (v.is_string()) return parse_decimal(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number()) return parse_decimal(shortest_decimal(v.get<double>()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected a decimal string or number");
}

std::vector<Rational> exact_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array of decimals");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(exact(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

MollifierShape mollifier(const json& sec, const std::string& where, const std::string& name) {
  const std::string shape_key = name + "_shape";
  const std::string raw_key = name + "_raw";
  const bool has_shape = sec.contains(shape_key);
  const bool has_raw = sec.contains(raw_key);
  if (has_shape && has_raw) throw ConfigError(join(where, raw_key), "give either " + shape_key + " or " + raw_key);
  if (has_shape) return MollifierShape{exact_list(sec.at(shape_key), join(where, shape_key))};
  if (has_raw) {
    const Poly p(exact_list(sec.at(raw_key), join(where, raw_key)));
    try {
      return mollifier_shape_of(p);
    } catch (const ConstraintViolation& e) {
      throw ConfigError(join(where, raw_key), e.what());
    }
  }
  throw ConfigError(join(where, shape_key), "missing");
}

TwistShape twist(const json& sec, const std::string& where) {
  const bool has_shape = sec.contains("q_linear") || sec.contains("q_sym");
  const bool has_raw = sec.contains("q_raw");
  if (has_shape && has_raw) throw ConfigError(join(where, "q_raw"), "give either q_linear/q_sym or q_raw");
  if (has_raw) {
    const Poly q(exact_list(sec.at("q_raw"), join(where, "q_raw")));
    try {
      return twist_shape_of(q);
    } catch (const ConstraintViolation& e) {
      throw ConfigError(join(where, "q_raw"), e.what());
    }
  }
  TwistShape t;
  if (sec.contains("q_linear")) t.linear_coeff = exact(sec.at("q_linear"), join(where, "q_linear"));
  if (sec.contains("q_sym")) t.sym_coeffs = exact_list(sec.at("q_sym"), join(where, "q_sym"));
  return t;
}

json rational_list(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const auto& q : v) arr.push_back(rational_text(q));
  return arr;
}

template <class F>
void validated(const std::string& field, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

std::string rational_text(const Rational& q) {
  const std::string dec = shortest_decimal(to_double(q));
  if (parse_decimal(dec) == q) return dec;
  return q.get_str();
}

nlohmann::json default_config_json() {
  return json{
      {"theta", 1},
      {"section4",
       {{"p1_shape", {"-0.158", "0.25"}}, {"p2_shape", {"0.492", "0.075"}}, {"r", 1.154}, {"R", 0.617}}},
      {"section5",
       {{"p_shape", {"-0.482", "-0.392", "-0.262"}},
        {"q_linear", "-0.673"},
        {"q_sym", {"0.369", "-4.635"}},
        {"R", 0.746},
        {"delta", 0.771}}},
  };
}

RunConfig default_config() { return parse_config(default_config_json()); }

RunConfig parse_config(const nlohmann::json& doc) {
  require_object(doc, "<root>");
  reject_unknown(doc, "", {"theta", "section4", "section5", "search", "output", "given"});
  RunConfig cfg;
  const double theta = doc.contains("theta") ? scalar(doc.at("theta"), "theta") : 1.0;

  if (!doc.contains("section4")) throw ConfigError("section4", "missing");
  const json& s4 = require_object(doc.at("section4"), "section4");
  reject_unknown(s4, "section4", {"p1_shape", "p2_shape", "p1_raw", "p2_raw", "r", "R"});
  cfg.section4.p1_shape = mollifier(s4, "section4", "p1");
  cfg.section4.p2_shape = mollifier(s4, "section4", "p2");
  cfg.section4.theta = theta;
  if (!s4.contains("r")) throw ConfigError("section4.r", "missing");
  if (!s4.contains("R")) throw ConfigError("section4.R", "missing");
  cfg.section4.r = scalar(s4.at("r"), "section4.r");
  cfg.section4.R = scalar(s4.at("R"), "section4.R");
  validated("section4", [&] { cfg.section4.validate(); });

  if (!doc.contains("section5")) throw ConfigError("section5", "missing");
  const json& s5 = require_object(doc.at("section5"), "section5");
  reject_unknown(s5, "section5", {"p_shape", "p_raw", "q_linear", "q_sym", "q_raw", "R", "delta"});
  cfg.section5.p_shape = mollifier(s5, "section5", "p");
  cfg.section5.q_shape = twist(s5, "section5");
  cfg.section5.theta = theta;
  if (!s5.contains("R")) throw ConfigError("section5.R", "missing");
  cfg.section5.R = scalar(s5.at("R"), "section5.R");
  cfg.section5.delta = s5.contains("delta") ? scalar(s5.at("delta"), "section5.delta") : 1.0;
  validated("section5", [&] { cfg.section5.validate(); });

  if (doc.contains("search")) {
    const json& s = require_object(doc.at("search"), "search");
    reject_unknown(s, "search", {"target", "bounds", "budget", "restarts", "seed", "free_shapes", "shape_degrees"});
    SearchConfig sc;
    if (!s.contains("target")) throw ConfigError("search.target", "missing");
    if (!s.at("target").is_string()) throw ConfigError("search.target", "expected a string");
    validated("search.target", [&] { sc.target = parse_target(s.at("target").get<std::string>()); });
    if (s.contains("bounds")) {
      const json& b = require_object(s.at("bounds"), "search.bounds");
      for (const auto& [name, range] : b.items()) {
        const std::string field = "search.bounds." + name;
        if (!range.is_array() || range.size() != 2) throw ConfigError(field, "expected [lo, hi]");
        sc.bounds[name] = Interval{scalar(range[0], field + "[0]"), scalar(range[1], field + "[1]")};
      }
    }
    if (s.contains("budget")) sc.budget = integer(s.at("budget"), "search.budget");
    if (s.contains("restarts")) sc.restarts = integer(s.at("restarts"), "search.restarts");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) throw ConfigError("search.seed", "expected a non-negative integer");
      sc.seed = s.at("seed").get<std::uint64_t>();
    }
    if (s.contains("free_shapes")) {
      if (!s.at("free_shapes").is_boolean()) throw ConfigError("search.free_shapes", "expected true or false");
      sc.free_shapes = s.at("free_shapes").get<bool>();
    }
    if (s.contains("shape_degrees")) {
      const json& d = s.at("shape_degrees");
      if (!d.is_array() || d.size() != 2) throw ConfigError("search.shape_degrees", "expected [m, m']");
      sc.shape_degrees = {integer(d[0], "search.shape_degrees[0]"), integer(d[1], "search.shape_degrees[1]")};
    }
    cfg.search = sc;
    validated("search", [&] { make_search_spec(cfg).validate(); });
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (o == "human") {
      cfg.output = OutputMode::human;
    } else if (o == "machine") {
      cfg.output = OutputMode::machine;
    } else {
      throw ConfigError("output", "expected \"human\" or \"machine\"");
    }
  }

  if (doc.contains("given")) {
    const json& g = require_object(doc.at("given"), "given");
    reject_unknown(g, "given", {"c", "c1"});
    if (g.contains("c")) cfg.given_c = scalar(g.at("c"), "given.c");
    if (g.contains("c1")) cfg.given_c1 = scalar(g.at("c1"), "given.c1");
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) {
      (*node)[part] = json::parse(value, nullptr, false).is_discarded() ? json(value) : json::parse(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

nlohmann::json to_json(const RunConfig& cfg) {
  json doc{
      {"theta", cfg.section4.theta},
      {"section4",
       {{"p1_shape", rational_list(cfg.section4.p1_shape.coeffs)},
        {"p2_shape", rational_list(cfg.section4.p2_shape.coeffs)},
        {"r", cfg.section4.r},
        {"R", cfg.section4.R}}},
      {"section5",
       {{"p_shape", rational_list(cfg.section5.p_shape.coeffs)},
        {"q_linear", rational_text(cfg.section5.q_shape.linear_coeff)},
        {"q_sym", rational_list(cfg.section5.q_shape.sym_coeffs)},
        {"R", cfg.section5.R},
        {"delta", cfg.section5.delta}}},
  };
  if (cfg.search) {
    json bounds = json::object();
    for (const auto& [name, iv] : cfg.search->bounds) bounds[name] = {iv.lo, iv.hi};
    doc["search"] = {{"target", to_string(cfg.search->target)},
                     {"bounds", bounds},
                     {"budget", cfg.search->budget},
                     {"restarts", cfg.search->restarts},
                     {"seed", cfg.search->seed},
                     {"free_shapes", cfg.search->free_shapes}};
    if (!cfg.search->shape_degrees.empty()) doc["search"]["shape_degrees"] = cfg.search->shape_degrees;
  }
  return doc;
}

SearchSpec make_search_spec(const RunConfig& cfg) {
  if (!cfg.search) throw ConfigError("search", "missing");
  SearchSpec spec;
  spec.target = cfg.search->target;
  spec.section4 = cfg.section4;
  spec.section5 = cfg.section5;
  spec.bounds = cfg.search->bounds;
  spec.free_shapes = cfg.search->free_shapes;
  spec.shape_degrees = cfg.search->shape_degrees;
  spec.budget = cfg.search->budget;
  spec.restarts = cfg.search->restarts;
  spec.seed = cfg.search->seed;
  return spec;
}

}  // namespace zeroprop::cli
