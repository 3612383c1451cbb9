#include "decent/bound.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "decent/error.hpp"

namespace decent {
namespace {

constexpr std::uint64_t kBlockSize = 16384;
constexpr double kZ95 = 1.959963984540054;

struct Accumulator {
  double score = 0.0;
  double score_sq = 0.0;
  std::uint64_t successes = 0;
  std::vector<double> contrib;
  std::vector<double> contrib_sq;

  explicit Accumulator(std::size_t lines) : contrib(lines, 0.0), contrib_sq(lines, 0.0) {}
};

double line_u(const WalkState& s, const WalkParams& p) {
  if (p.strategy == WalkStrategy::micro) return p.u;
  const double gap = s.a / ((1.0 + p.epsilon) * s.b_line);
  return std::pow(gap, 1.0 / static_cast<double>(p.n_jump)) - 1.0;
}

// Moves along the current line until the rich node gains (returns false) or
// the poor node reaches the target ratio (returns true).
bool traverse_line(WalkState& s, const WalkParams& p, Rng& rng) {
  if (p.strategy == WalkStrategy::max_step) {
    for (;;) {
      if (uniform01(rng) < s.b / (s.a + s.b)) {
        s.b += p.rho;
        if (s.succeeded(p.epsilon)) return true;
      } else {
        s.a += p.rho;
        ++s.k;
        s.b_line = s.b;
        return false;
      }
    }
  }
  const double u = line_u(s, p);
  const double log_step = std::log1p(u);
  const double needed = p.strategy == WalkStrategy::micro
                            ? std::ceil(std::log(s.a / ((1.0 + p.epsilon) * s.b)) / log_step)
                            : static_cast<double>(p.n_jump);
  const double log_q = std::log(p.rho) - std::log(p.rho + s.a * u);
  const double poor_steps = std::floor(std::log(uniform01_open_low(rng)) / log_q);
  if (poor_steps >= needed) return true;
  s.b *= std::exp(poor_steps * log_step);
  s.a += p.rho;
  ++s.k;
  s.b_line = s.b;
  return false;
}

void run_sample(const WalkParams& p, Rng& rng, Accumulator& acc) {
  WalkState s = WalkState::initial(p.f);
  double survive = 1.0;
  bool reached = false;
  for (std::size_t k = 0; k <= p.k_max && !reached; ++k) {
    double c = 0.0;
    if (s.succeeded(p.epsilon)) {
      c = survive;
      reached = true;
    } else {
      const double j = jump_prob(s, p.epsilon, p.rho);
      c = survive * j;
      survive *= 1.0 - j;
      if (k < p.k_max && traverse_line(s, p, rng)) {
        c += survive;
        reached = true;
      }
    }
    if (reached) survive = 0.0;
    acc.contrib[k] += c;
    acc.contrib_sq[k] += c * c;
  }
  if (reached) ++acc.successes;
  const double score = 1.0 - survive;
  acc.score += score;
  acc.score_sq += score * score;
}

double standard_error(double sum, double sum_sq, double n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return std::sqrt(var / n);
}

}  // namespace

std::string to_string(WalkStrategy s) {
  switch (s) {
    case WalkStrategy::micro: return "micro";
    case WalkStrategy::max_step: return "max-step";
    case WalkStrategy::hybrid: return "hybrid";
  }
  return "micro";
}

WalkStrategy parse_strategy(const std::string& name) {
  if (name == "micro") return WalkStrategy::micro;
  if (name == "max-step") return WalkStrategy::max_step;
  if (name == "hybrid") return WalkStrategy::hybrid;
  fail(ErrorKind::config, "unknown strategy '" + name + "' (expected micro, max-step or hybrid)");
}

void WalkParams::validate() const {
  require(f > 0.0 && f <= 1.0, ErrorKind::domain, "f must lie in (0, 1]");
  require(rho > 0.0 && std::isfinite(rho), ErrorKind::domain, "rho must be positive");
  require(epsilon >= 0.0 && std::isfinite(epsilon), ErrorKind::domain, "epsilon must be non-negative");
  require(u > 0.0 && std::isfinite(u), ErrorKind::domain, "u must be positive");
  require(k_max >= 1, ErrorKind::domain, "k_max must be at least 1");
  require(samples >= 1, ErrorKind::domain, "samples must be at least 1");
  require(n_jump >= 1, ErrorKind::domain, "n_jump must be at least 1");
  const double work = static_cast<double>(samples) * static_cast<double>(k_max);
  require(work <= budget, ErrorKind::budget,
          "samples * k_max = " + std::to_string(work) + " exceeds the budget of " + std::to_string(budget));
}

double jump_prob(const WalkState& s, double epsilon, double rho) {
  if (s.succeeded(epsilon)) return 1.0;
  return rho / (rho + s.a * (s.a / ((1.0 + epsilon) * s.b) - 1.0));
}

double poor_step_prob(const WalkState& s, const WalkParams& p) {
  if (p.strategy == WalkStrategy::max_step) return s.b / (s.a + s.b);
  if (s.succeeded(p.epsilon)) return 1.0;
  const double u = line_u(s, p);
  return p.rho / (p.rho + s.a * u);
}

WalkState walk_step(const WalkState& s, const WalkParams& p, Rng& rng) {
  WalkState next = s;
  if (uniform01(rng) < poor_step_prob(s, p)) {
    next.b = p.strategy == WalkStrategy::max_step ? s.b + p.rho : s.b * (1.0 + line_u(s, p));
  } else {
    next.a += p.rho;
    ++next.k;
    next.b_line = next.b;
  }
  return next;
}

BoundEstimate estimate_g(const WalkParams& p, unsigned threads) {
  p.validate();
  const std::size_t lines = p.k_max + 1;
  const std::uint64_t blocks = (p.samples + kBlockSize - 1) / kBlockSize;
  std::vector<Accumulator> parts(blocks, Accumulator(lines));
  parallel_for(blocks, threads, [&](std::size_t block) {
    const std::uint64_t first = block * kBlockSize;
    const std::uint64_t last = std::min(p.samples, first + kBlockSize);
    for (std::uint64_t i = first; i < last; ++i) {
      Rng rng(derive_seed(p.seed, i));
      run_sample(p, rng, parts[block]);
    }
  });

  Accumulator total(lines);
  for (const auto& part : parts) {
    total.score += part.score;
    total.score_sq += part.score_sq;
    total.successes += part.successes;
    for (std::size_t k = 0; k < lines; ++k) {
      total.contrib[k] += part.contrib[k];
      total.contrib_sq[k] += part.contrib_sq[k];
    }
  }
  const double n = static_cast<double>(p.samples);
  BoundEstimate out;
  out.samples = p.samples;
  out.estimate = total.score / n;
  out.standard_error = standard_error(total.score, total.score_sq, n);
  out.ci_low = std::max(0.0, out.estimate - kZ95 * out.standard_error);
  out.ci_high = std::min(1.0, out.estimate + kZ95 * out.standard_error);
  out.success_fraction = static_cast<double>(total.successes) / n;
  out.contributions.resize(lines);
  out.contribution_se.resize(lines);
  for (std::size_t k = 0; k < lines; ++k) {
    out.contributions[k] = total.contrib[k] / n;
    out.contribution_se[k] = standard_error(total.contrib[k], total.contrib_sq[k], n);
  }
  return out;
}

P0Estimate p0_fraction(const WalkParams& p, unsigned threads) {
  WalkParams first_line = p;
  first_line.k_max = 1;
  const auto g = estimate_g(first_line, threads);
  return {g.contributions[0], g.contribution_se[0], (1.0 + p.epsilon) * p.f};
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const WalkParams& base, unsigned threads) {
  require(!grid.f.empty() && !grid.epsilon.empty() && !grid.rho.empty(), ErrorKind::domain,
          "sweep grid axes must be non-empty");
  std::vector<SweepRow> rows;
  for (double rho : grid.rho) {
    for (double eps : grid.epsilon) {
      for (double f : grid.f) {
        WalkParams p = base;
        p.f = f;
        p.epsilon = eps;
        p.rho = rho;
        const auto g = estimate_g(p, threads);
        rows.push_back({f, eps, rho, g.estimate, g.ci_low, g.ci_high});
      }
    }
  }
  return rows;
}

std::size_t monotonicity_violations(const std::vector<SweepRow>& rows) {
  std::map<std::tuple<double, double>, std::vector<const SweepRow*>> along_f, along_eps;
  for (const auto& r : rows) {
    along_f[{r.epsilon, r.rho}].push_back(&r);
    along_eps[{r.f, r.rho}].push_back(&r);
  }
  std::size_t violations = 0;
  auto count = [&](auto& groups, auto key) {
    for (auto& [_, g] : groups) {
      std::sort(g.begin(), g.end(), [&](const SweepRow* x, const SweepRow* y) { return key(*x) < key(*y); });
      for (std::size_t i = 1; i < g.size(); ++i) {
        if (g[i]->ci_high < g[i - 1]->ci_low) ++violations;
      }
    }
  };
  count(along_f, [](const SweepRow& r) { return r.f; });
  count(along_eps, [](const SweepRow& r) { return r.epsilon; });
  return violations;
}

RealWorldAnchors real_world_anchors() noexcept { return {}; }

}  // namespace decent
