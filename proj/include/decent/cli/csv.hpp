#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "decent/bound.hpp"
#include "decent/dynamics.hpp"
#include "decent/metrics.hpp"

namespace decent::cli {

// Shortest text that parses back to the same double.
std::string format_number(double value);

// Reads `address,blocks` rows after that exact header.
ProducerDataset read_producers(const std::string& path);
ProducerDataset parse_producers(std::istream& in, const std::string& source);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_contributions_csv(std::ostream& out, const BoundEstimate& estimate);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_metrics_csv(std::ostream& out, const MetricsReport& report);

}  // namespace decent::cli
