#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace decent {

struct ProducerEntry {
  std::string address;
  std::uint64_t blocks = 0;

  bool operator==(const ProducerEntry&) const = default;
};

// Block counts per producer address, held in descending block order with
// ties broken by ascending address.
class ProducerDataset {
 public:
  // Throws structural on duplicate addresses.
  explicit ProducerDataset(std::vector<ProducerEntry> entries);

  std::span<const ProducerEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::uint64_t total_blocks() const noexcept;
  std::vector<double> counts() const;

 private:
  std::vector<ProducerEntry> entries_;
};

// Leading producers whose predecessors hold strictly less than a fraction x
// of all blocks.
ProducerDataset top_share_subset(const ProducerDataset& ds, double x);

// Mean absolute difference over all ordered pairs divided by twice the mean.
double gini(std::span<const double> counts);

// Shannon entropy in bits; zero counts contribute nothing.
double shannon_entropy(std::span<const double> counts);

struct MetricsRow {
  double x = 1.0;
  std::size_t size = 0;
  double gini = 0.0;
  double entropy = 0.0;
};

struct MetricsReport {
  std::array<MetricsRow, 3> rows;  // x = 1, 1/2, 1/3
};

inline constexpr std::array<double, 3> kReportShares{1.0, 1.0 / 2.0, 1.0 / 3.0};

MetricsReport report(const ProducerDataset& ds);

}  // namespace decent
