#include "decent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "decent/error.hpp"

namespace decent {
namespace {

double checked_total(std::span<const double> counts) {
  require(!counts.empty(), ErrorKind::domain, "metrics need at least one count");
  double total = 0.0;
  for (double c : counts) {
    require(c >= 0.0 && std::isfinite(c), ErrorKind::domain, "counts must be finite and non-negative");
    total += c;
  }
  require(total > 0.0, ErrorKind::domain, "counts must not all be zero");
  return total;
}

}  // namespace

ProducerDataset::ProducerDataset(std::vector<ProducerEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    require(seen.insert(e.address).second, ErrorKind::structural, "duplicate address '" + e.address + "'");
  }
  std::sort(entries_.begin(), entries_.end(), [](const ProducerEntry& a, const ProducerEntry& b) {
    return a.blocks != b.blocks ? a.blocks > b.blocks : a.address < b.address;
  });
}

std::uint64_t ProducerDataset::total_blocks() const noexcept {
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.blocks;
  return total;
}

std::vector<double> ProducerDataset::counts() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(static_cast<double>(e.blocks));
  return out;
}

ProducerDataset top_share_subset(const ProducerDataset& ds, double x) {
  require(x >= 0.0 && x <= 1.0, ErrorKind::domain, "share x must lie in [0, 1]");
  const double total = static_cast<double>(ds.total_blocks());
  require(total > 0.0, ErrorKind::domain, "dataset has no blocks");
  std::vector<ProducerEntry> kept;
  std::uint64_t before = 0;
  for (const auto& e : ds.entries()) {
    if (!(static_cast<double>(before) / total < x)) break;
    kept.push_back(e);
    before += e.blocks;
  }
  return ProducerDataset(std::move(kept));
}

double gini(std::span<const double> counts) {
  const double total = checked_total(counts);
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  // sum_{i,j} |x_i - x_j| = 2 * sum_i (2i - n + 1) x_(i) over ascending order
  const double n = static_cast<double>(sorted.size());
  double weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) weighted += (2.0 * static_cast<double>(i) - n + 1.0) * sorted[i];
  return std::max(0.0, 2.0 * weighted / (2.0 * n * total));
}

double shannon_entropy(std::span<const double> counts) {
  const double total = checked_total(counts);
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return std::max(0.0, h);
}

MetricsReport report(const ProducerDataset& ds) {
  MetricsReport out;
  for (std::size_t i = 0; i < kReportShares.size(); ++i) {
    const auto subset = top_share_subset(ds, kReportShares[i]);
    auto& row = out.rows[i];
    row.x = kReportShares[i];
    row.size = subset.size();
    if (subset.size() > 0 && subset.total_blocks() > 0) {
      const auto c = subset.counts();
      row.gini = gini(c);
      row.entropy = shannon_entropy(c);
    }
  }
  return out;
}

}  // namespace decent
