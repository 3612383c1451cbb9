#include "decent/cli/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "decent/bound.hpp"
#include "decent/cli/csv.hpp"
#include "decent/conditions.hpp"
#include "decent/dynamics.hpp"
#include "decent/error.hpp"
#include "decent/metrics.hpp"

namespace decent::cli {
namespace {

std::uint64_t count_key(const RunConfig& c, const std::string& key, std::int64_t min) {
  const auto v = c.integer(key);
  require(v >= min, ErrorKind::config,
          "key '" + c.command + "." + key + "': must be at least " + std::to_string(min));
  return static_cast<std::uint64_t>(v);
}

WalkParams walk_from_config(const RunConfig& c) {
  WalkParams p;
  p.u = c.number("u");
  p.k_max = count_key(c, "k_max", 1);
  p.samples = count_key(c, "samples", 1);
  p.strategy = parse_strategy(c.text("strategy"));
  p.n_jump = count_key(c, "n_jump", 1);
  p.budget = c.number("budget");
  p.seed = c.seed();
  return p;
}

Json estimate_json(const BoundEstimate& g) {
  return {{"estimate", g.estimate}, {"standard_error", g.standard_error}, {"ci_low", g.ci_low},
          {"ci_high", g.ci_high}};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunOutput run_bound(const RunConfig& c, unsigned threads) {
  auto p = walk_from_config(c);
  p.f = c.number("f");
  p.rho = c.number("rho");
  p.epsilon = c.number("epsilon");
  const auto g = estimate_g(p, threads);

  Json sensitivity = Json::array();
  for (double u : c.numbers("sensitivity_u")) {
    auto q = p;
    q.u = u;
    const auto s = q.u == p.u ? g : estimate_g(q, threads);
    auto row = estimate_json(s);
    row["u"] = u;
    sensitivity.push_back(row);
  }

  RunOutput out;
  out.results = estimate_json(g);
  out.results["ci_level"] = 0.95;
  out.results["samples"] = g.samples;
  out.results["success_fraction"] = g.success_fraction;
  out.results["jump_floor"] = jump_prob(WalkState::initial(p.f), p.epsilon, p.rho);
  out.results["p0"] = {{"value", g.contributions[0]},
                       {"standard_error", g.contribution_se[0]},
                       {"bound", (1.0 + p.epsilon) * p.f}};
  out.results["contributions"] = g.contributions;
  out.results["contribution_se"] = g.contribution_se;
  out.results["u_sensitivity"] = sensitivity;
  std::ostringstream csv;
  write_contributions_csv(csv, g);
  out.csv = csv.str();
  return out;
}

RunOutput run_sweep(const RunConfig& c, unsigned threads) {
  const auto base = walk_from_config(c);
  const auto rows = sweep({c.numbers("f"), c.numbers("epsilon"), c.numbers("rho")}, base, threads);
  RunOutput out;
  Json table = Json::array();
  for (const auto& r : rows) {
    table.push_back({{"f", r.f}, {"epsilon", r.epsilon}, {"rho", r.rho}, {"estimate", r.estimate},
                     {"ci_low", r.ci_low}, {"ci_high", r.ci_high}});
  }
  out.results = {{"rows", table}, {"monotonicity_violations", monotonicity_violations(rows)}};
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  out.csv = csv.str();
  return out;
}

SimConfig sim_from_config(const RunConfig& c) {
  SimConfig s;
  s.model = model_from_config(c);
  s.reward = RewardParams{c.number("r"), c.number("r_max")};
  s.horizon = count_key(c, "horizon", 0);
  s.n_nodes = count_key(c, "n_nodes", 1);
  const auto init = c.text("init");
  if (init == "power-law") {
    s.init = PowerLawInit{c.number("exponent")};
  } else if (init == "explicit") {
    s.init = ExplicitInit{c.numbers("powers")};
  } else if (init == "two-point") {
    s.init = TwoPointInit{c.number("two_point_f"), count_key(c, "rich", 0), count_key(c, "poor", 0)};
  } else {
    fail(ErrorKind::config, "key 'simulate.init': expected power-law, explicit or two-point");
  }
  const auto runs = count_key(c, "seeds", 1);
  s.seeds.resize(runs);
  for (std::uint64_t i = 0; i < runs; ++i) s.seeds[i] = c.seed() + i;
  s.epsilon = c.number("epsilon");
  s.delta = c.number("delta");
  return s;
}

RunOutput run_simulate(const RunConfig& c, unsigned threads) {
  const auto s = sim_from_config(c);
  const auto window_key = count_key(c, "window", 0);
  const auto trajectories = simulate(s, threads);
  const std::size_t window = window_key == 0 ? default_window(s.horizon) : window_key;

  Json means = Json::array();
  for (const auto& m : fraction_means(trajectories, s.horizon)) {
    means.push_back({{"mean", m.mean}, {"standard_error", m.standard_error}});
  }
  std::vector<double> final_ratio, final_max;
  for (const auto& tr : trajectories) {
    final_ratio.push_back(tr.ratios.back());
    const auto row = tr.row(tr.steps());
    final_max.push_back(*std::max_element(row.begin(), row.end()));
  }
  RunOutput out;
  const auto first = trajectories.front().row(0);
  out.results["runs"] = trajectories.size();
  out.results["initial_fractions"] = std::vector<double>(first.begin(), first.end());
  out.results["final_fraction_means"] = means;
  out.results["final_ratio"] = {{"median", median(final_ratio)},
                                {"min", *std::min_element(final_ratio.begin(), final_ratio.end())},
                                {"max", *std::max_element(final_ratio.begin(), final_ratio.end())}};
  out.results["final_beta_max"] = {{"median", median(final_max)},
                                   {"min", *std::min_element(final_max.begin(), final_max.end())}};
  if (s.horizon >= 1) {
    const auto ed = ed_verdict(trajectories, s.epsilon, s.delta, window);
    out.results["ed"] = {{"window", window},
                         {"converged", ed.converged},
                         {"converged_fraction", ed.converged_fraction},
                         {"mean_final_ratio", ed.mean_final_ratio}};
  } else {
    out.results["ed"] = nullptr;
  }
  if (trajectories.size() >= kMinMonotonicitySeeds) {
    const auto m = monotonicity_stats(trajectories);
    out.results["monotonicity"] = {{"beta_min_slope", m.beta_min.slope},
                                   {"beta_min_standard_error", m.beta_min.standard_error},
                                   {"beta_max_slope", m.beta_max.slope},
                                   {"beta_max_standard_error", m.beta_max.standard_error}};
  } else {
    out.results["monotonicity"] = nullptr;
  }

  const auto dir = c.text("trajectory_dir");
  if (!dir.empty()) {
    const std::filesystem::path base = resolve_output_path(dir);
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    for (const auto& tr : trajectories) {
      const auto path = base / ("trajectory_" + std::to_string(tr.seed) + ".csv");
      std::ofstream file(path);
      require(file.good(), ErrorKind::io, "cannot write '" + path.string() + "'");
      write_trajectory_csv(file, tr);
    }
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, trajectories.front());
  out.csv = csv.str();
  return out;
}

RunOutput run_metrics(const RunConfig& c) {
  const auto ds = read_producers(c.text("input"));
  const auto r = report(ds);
  RunOutput out;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"x", row.x}, {"size", row.size}, {"gini", row.gini}, {"entropy", row.entropy}});
  }
  out.results = {{"addresses", ds.size()}, {"total_blocks", ds.total_blocks()}, {"rows", rows}};
  std::ostringstream csv;
  write_metrics_csv(csv, r);
  out.csv = csv.str();
  return out;
}

RunOutput run_check(const RunConfig& c) {
  const auto model = model_from_config(c);
  const PowerVector pv(c.numbers("powers"));
  const auto names = c.texts("players");
  const auto pm = names.empty() ? PlayerMap::one_per_node(pv.size()) : PlayerMap(names);
  const auto m = static_cast<int>(count_key(c, "m", 1));
  const SearchLimits limits{count_key(c, "grid", 1), count_key(c, "max_nodes", 1)};
  const auto sybil_name = c.text("sybil");
  SybilCostModel sybil;
  if (sybil_name == "zero") {
    sybil = ZeroSybilCost{};
  } else if (sybil_name == "threshold") {
    sybil = ThresholdCoverCost{c.number("margin")};
  } else {
    fail(ErrorKind::config, "key 'check.sybil': expected zero or threshold");
  }

  const auto gr = check_gr(model, pv, m);
  std::size_t max_m = 0;
  while (max_m < pv.size() && check_gr(model, pv, static_cast<int>(max_m + 1)).holds) ++max_m;
  const auto nd = check_nd(model, pv, pm, m, limits);
  const auto ns = check_ns(model, sybil, pv, pm, c.number("delta"), limits);
  Rng rng(derive_seed(c.seed(), 0));
  const auto lin = check_linearity(model, count_key(c, "linearity_trials", 1), rng);

  Json nd_witness = nullptr;
  if (nd.witness) {
    const auto& w = *nd.witness;
    nd_witness = {{"merged_nodes", w.merged_nodes}, {"surviving_nodes", w.surviving_nodes},
                  {"allocation", w.allocation},     {"separate_total", w.separate_total},
                  {"merged_total", w.merged_total}, {"gain", w.gain()}};
  }
  Json ns_witness = nullptr;
  if (ns.witness) {
    const auto& w = *ns.witness;
    ns_witness = {{"player", w.player},
                  {"parts", w.parts},
                  {"single_utility", w.single_utility},
                  {"split_utility", w.split_utility},
                  {"sybil_cost", w.sybil_cost},
                  {"gain", w.gain()}};
  }
  Json utilities_json = Json::array();
  for (const auto& u : utilities(model, pv)) utilities_json.push_back(u ? Json(*u) : Json(nullptr));

  RunOutput out;
  out.results = {
      {"model", model_name(model)},
      {"utilities", utilities_json},
      {"gr", {{"m", m}, {"holds_for_m", gr.holds}, {"earning_nodes", gr.earning_nodes}, {"max_m_satisfied", max_m}}},
      {"nd", {{"holds", nd.holds}, {"configurations", nd.configurations}, {"witness", nd_witness}}},
      {"ns", {{"holds", ns.holds}, {"configurations", ns.configurations}, {"witness", ns_witness}}},
      {"linearity", {{"is_linear", lin.is_linear}, {"max_violation", lin.max_violation}, {"trials", lin.trials}}},
      {"ed", "deferred"},
  };
  return out;
}

RunOutput run_anchors() {
  const auto a = real_world_anchors();
  RunOutput out;
  out.results = {{"f0", a.f0}, {"f15", a.f15}, {"f50", a.f50}, {"rho", a.rho}};
  return out;
}

}  // namespace

RunOutput execute(const RunConfig& config, unsigned threads) {
  RunOutput out;
  const auto& cmd = config.command;
  if (cmd == "bound") {
    out = run_bound(config, threads);
  } else if (cmd == "sweep") {
    out = run_sweep(config, threads);
  } else if (cmd == "simulate") {
    out = run_simulate(config, threads);
  } else if (cmd == "metrics") {
    out = run_metrics(config);
  } else if (cmd == "check") {
    out = run_check(config);
  } else if (cmd == "anchors") {
    out = run_anchors();
  } else {
    fail(ErrorKind::config, "unknown command '" + cmd + "'");
  }
  if (config.text("format") == "csv") {
    require(!out.csv.empty(), ErrorKind::config, "key '" + cmd + ".format': csv is not available for " + cmd);
  }
  return out;
}

Json make_report(const RunConfig& config, const Json& results, double wall_time_seconds) {
  return {{"version", kVersion},
          {"schema", kReportSchema},
          {"command", config.command},
          {"config", config.values},
          {"results", results},
          {"wall_time_seconds", wall_time_seconds}};
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  const char* dir = std::getenv("DECENT_OUTPUT_DIR");
  if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / p).string();
}

}  // namespace decent::cli
