#include "decent/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "decent/error.hpp"

namespace decent::cli {
namespace {

KeySpec num(std::string name, Json fallback, std::string help) {
  return {std::move(name), KeyType::number, std::move(fallback), std::move(help)};
}
KeySpec integer(std::string name, Json fallback, std::string help) {
  return {std::move(name), KeyType::integer, std::move(fallback), std::move(help)};
}
KeySpec text(std::string name, Json fallback, std::string help) {
  return {std::move(name), KeyType::string, std::move(fallback), std::move(help)};
}
KeySpec nums(std::string name, Json fallback, std::string help) {
  return {std::move(name), KeyType::number_list, std::move(fallback), std::move(help)};
}
KeySpec texts(std::string name, Json fallback, std::string help) {
  return {std::move(name), KeyType::string_list, std::move(fallback), std::move(help)};
}

std::vector<KeySpec> output_keys() {
  return {text("output", "", "report path; empty writes to stdout"),
          text("format", "json", "json or csv")};
}

std::vector<KeySpec> model_keys(const std::string& default_model) {
  return {
      text("model", default_model, "pow, pos, dpos, gamma or linear"),
      num("br", 1.0, "block reward"),
      num("c1", 0.0, "electricity cost per unit of power (pow)"),
      num("c2", 0.0, "fixed cost per node (pow, pos, dpos)"),
      num("stake", 0.0, "minimum stake (pos)"),
      integer("elected", 1, "number of elected producers (dpos)"),
      num("gamma", 0.5, "lottery exponent (gamma)"),
      num("k", 1.0, "utility coefficient (linear)"),
      text("schedule", "auto", "constant, inverse-total or auto"),
  };
}

std::vector<KeySpec> walk_keys() {
  return {
      num("u", 1e-3, "relative poor gain per micro step"),
      integer("k_max", 100, "largest number of rich gains followed"),
      integer("samples", 100000, "Monte Carlo samples"),
      text("strategy", "micro", "micro, max-step or hybrid"),
      integer("n_jump", 1, "steps per line for the hybrid strategy"),
      num("budget", 1e10, "largest allowed samples * k_max"),
  };
}

std::vector<KeySpec> join(std::initializer_list<std::vector<KeySpec>> parts) {
  std::vector<KeySpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::map<std::string, std::vector<KeySpec>>& schemas() {
  static const std::map<std::string, std::vector<KeySpec>> table{
      {"bound", join({{num("f", nullptr, "poor / rich initial power ratio"),
                       num("rho", nullptr, "largest reinvested reward / richest initial power"),
                       num("epsilon", 0.0, "target ratio slack")},
                      walk_keys(),
                      {nums("sensitivity_u", Json::array(), "extra u values to report"),
                       integer("seed", nullptr, "master seed")},
                      output_keys()})},
      {"sweep", join({{nums("f", nullptr, "f grid"), nums("epsilon", Json::array({0.0}), "epsilon grid"),
                       nums("rho", Json::array({0.1}), "rho grid")},
                      walk_keys(),
                      {integer("seed", nullptr, "master seed")},
                      output_keys()})},
      {"simulate", join({model_keys("gamma"),
                         {num("r", 1.0, "reinvestment rate"), num("r_max", 1.0, "cap on net reward per step"),
                          integer("horizon", 1000, "time steps"), integer("n_nodes", 10, "number of nodes"),
                          text("init", "power-law", "power-law, explicit or two-point"),
                          nums("powers", Json::array(), "initial powers (explicit)"),
                          num("exponent", 2.0, "power-law exponent"),
                          num("two_point_f", 0.01, "poor / rich power (two-point)"),
                          integer("rich", 1, "rich node count (two-point)"),
                          integer("poor", 1, "poor node count (two-point)"),
                          integer("seeds", 100, "number of runs; run i uses seed + i"),
                          num("epsilon", 0.1, "convergence slack"), num("delta", 0.0, "percentile"),
                          integer("window", 0, "final steps checked; 0 uses the last 10%"),
                          text("trajectory_dir", "", "directory for per-run trajectory CSVs"),
                          integer("seed", nullptr, "master seed")},
                         output_keys()})},
      {"metrics", join({{text("input", nullptr, "CSV with header address,blocks")}, output_keys()})},
      {"check", join({model_keys("pow"),
                      {nums("powers", nullptr, "node powers"),
                       texts("players", Json::array(), "owner of each node; default one player per node"),
                       integer("m", 1, "required player count"), num("delta", 0.0, "percentile for NS"),
                       text("sybil", "zero", "zero or threshold"), num("margin", 0.0, "threshold cover margin"),
                       integer("grid", 20, "grid points per degree of freedom"),
                       integer("max_nodes", 6, "search bound on node count"),
                       integer("linearity_trials", 200, "random states for the linearity check"),
                       integer("seed", nullptr, "master seed")},
                      output_keys()})},
      {"anchors", output_keys()},
  };
  return table;
}

[[noreturn]] void config_error(const std::string& command, const std::string& key, const std::string& what) {
  fail(ErrorKind::config, "key '" + command + "." + key + "': " + what);
}

double parse_number(const std::string& s, bool& ok) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  ok = res.ec == std::errc() && res.ptr == end && !s.empty();
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Json coerce_scalar(const std::string& command, const KeySpec& spec, KeyType type, const Json& v) {
  const auto expected = std::string("expected ") + to_string(type);
  switch (type) {
    case KeyType::string:
      if (!v.is_string()) config_error(command, spec.name, expected);
      return v;
    case KeyType::number: {
      if (v.is_number()) return v.get<double>();
      bool ok = false;
      const double d = v.is_string() ? parse_number(v.get<std::string>(), ok) : 0.0;
      if (!ok) config_error(command, spec.name, expected);
      return d;
    }
    case KeyType::integer: {
      if (v.is_number_unsigned()) return v.get<std::uint64_t>();
      if (v.is_number_integer()) return v.get<std::int64_t>();
      bool ok = v.is_number_float();
      double d = ok ? v.get<double>() : 0.0;
      if (v.is_string()) {
        const auto& s = v.get<std::string>();
        std::uint64_t u = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), u);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty()) return u;
        d = parse_number(s, ok);
      }
      if (!ok || d != std::floor(d) || std::abs(d) > 9.007199254740992e15) config_error(command, spec.name, expected);
      if (d >= 0) return static_cast<std::uint64_t>(d);
      return static_cast<std::int64_t>(d);
    }
    default:
      break;
  }
  config_error(command, spec.name, expected);
}

Json coerce(const std::string& command, const KeySpec& spec, const Json& v) {
  if (spec.type != KeyType::number_list && spec.type != KeyType::string_list) {
    return coerce_scalar(command, spec, spec.type, v);
  }
  const auto element = spec.type == KeyType::number_list ? KeyType::number : KeyType::string;
  Json items = Json::array();
  if (v.is_string()) {
    for (const auto& part : split_list(v.get<std::string>())) items.push_back(part);
  } else if (v.is_array()) {
    items = v;
  } else if (element == KeyType::number && v.is_number()) {
    items.push_back(v);
  } else {
    config_error(command, spec.name, std::string("expected ") + to_string(spec.type));
  }
  Json out = Json::array();
  for (const auto& item : items) out.push_back(coerce_scalar(command, spec, element, item));
  return out;
}

}  // namespace

const char* to_string(KeyType type) noexcept {
  switch (type) {
    case KeyType::number: return "number";
    case KeyType::integer: return "integer";
    case KeyType::string: return "string";
    case KeyType::number_list: return "list of numbers";
    case KeyType::string_list: return "list of strings";
  }
  return "value";
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"simulate", "bound", "sweep", "metrics", "check", "anchors"};
  return names;
}

const std::vector<KeySpec>& schema(const std::string& command) {
  const auto it = schemas().find(command);
  require(it != schemas().end(), ErrorKind::config, "unknown command '" + command + "'");
  return it->second;
}

bool is_randomized(const std::string& command) {
  for (const auto& k : schema(command)) {
    if (k.name == "seed") return true;
  }
  return false;
}

RunConfig resolve_config(const std::string& command, const Json& raw) {
  const auto& keys = schema(command);
  require(raw.is_object(), ErrorKind::config, "configuration for '" + command + "' must be an object");
  std::set<std::string> known;
  for (const auto& k : keys) known.insert(k.name);
  for (const auto& [key, _] : raw.items()) {
    if (!known.count(key)) config_error(command, key, "unknown key");
  }
  RunConfig out;
  out.command = command;
  out.values = Json::object();
  for (const auto& spec : keys) {
    const auto it = raw.find(spec.name);
    if (it != raw.end() && !it->is_null()) {
      out.values[spec.name] = coerce(command, spec, *it);
    } else if (spec.name == "seed") {
      std::random_device rd;
      out.values["seed"] = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      out.seed_generated = true;
    } else if (spec.fallback.is_null()) {
      config_error(command, spec.name, "missing required key");
    } else {
      out.values[spec.name] = spec.fallback;
    }
  }
  const auto format = out.values["format"].get<std::string>();
  if (format != "json" && format != "csv") config_error(command, "format", "expected json or csv");
  return out;
}

Json load_config_file(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, "cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::config, "config file '" + path + "' is not valid JSON: " + e.what());
  }
  require(j.is_object(), ErrorKind::config, "config file '" + path + "' must hold a JSON object");
  if (j.contains("config") && j["config"].is_object()) {
    if (j.contains("command")) {
      require(j["command"] == command, ErrorKind::config,
              "config file '" + path + "' is a '" + j["command"].get<std::string>() + "' report");
    }
    return j["config"];
  }
  return j;
}

double RunConfig::number(const std::string& key) const { return values.at(key).get<double>(); }
std::int64_t RunConfig::integer(const std::string& key) const { return values.at(key).get<std::int64_t>(); }
std::uint64_t RunConfig::seed() const { return values.at("seed").get<std::uint64_t>(); }
std::string RunConfig::text(const std::string& key) const { return values.at(key).get<std::string>(); }
std::vector<double> RunConfig::numbers(const std::string& key) const {
  return values.at(key).get<std::vector<double>>();
}
std::vector<std::string> RunConfig::texts(const std::string& key) const {
  return values.at(key).get<std::vector<std::string>>();
}

IncentiveModel model_from_config(const RunConfig& c) {
  const auto name = c.text("model");
  const auto schedule_name = c.text("schedule");
  auto schedule = [&](RewardSchedule fallback) {
    if (schedule_name == "auto") return fallback;
    if (schedule_name == "constant") return RewardSchedule::constant;
    if (schedule_name == "inverse-total") return RewardSchedule::inverse_total;
    config_error(c.command, "schedule", "expected constant, inverse-total or auto");
  };
  const auto elected = c.integer("elected");
  if (elected < 0) config_error(c.command, "elected", "must be non-negative");
  IncentiveModel model;
  if (name == "pow") {
    model = PowModel{c.number("br"), c.number("c1"), c.number("c2")};
  } else if (name == "pos") {
    model = PosModel{c.number("br"), c.number("c2"), c.number("stake")};
  } else if (name == "dpos") {
    model = DposModel{c.number("br"), c.number("c2"), static_cast<std::size_t>(elected)};
  } else if (name == "gamma") {
    model = GammaModel{c.number("br"), c.number("gamma"), schedule(RewardSchedule::constant)};
  } else if (name == "linear") {
    model = LinearModel{c.number("k"), schedule(RewardSchedule::inverse_total)};
  } else {
    config_error(c.command, "model", "expected pow, pos, dpos, gamma or linear");
  }
  validate(model);
  return model;
}

}  // namespace decent::cli
