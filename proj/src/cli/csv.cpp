#include "decent/cli/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "decent/error.hpp"

namespace decent::cli {
namespace {

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

ProducerDataset parse_producers(std::istream& in, const std::string& source) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::structural, source + ": empty file");
  line = trim_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  require(line == "address,blocks", ErrorKind::structural, source + ": header must be 'address,blocks'");
  std::vector<ProducerEntry> entries;
  for (std::size_t number = 2; std::getline(in, line); ++number) {
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(number);
    const auto comma = line.find(',');
    require(comma != std::string::npos && line.find(',', comma + 1) == std::string::npos, ErrorKind::structural,
            where + ": expected two fields");
    const auto address = line.substr(0, comma);
    const auto blocks = line.substr(comma + 1);
    require(!address.empty(), ErrorKind::structural, where + ": empty address");
    std::uint64_t count = 0;
    const auto res = std::from_chars(blocks.data(), blocks.data() + blocks.size(), count);
    require(!blocks.empty() && res.ec == std::errc() && res.ptr == blocks.data() + blocks.size(),
            ErrorKind::structural, where + ": blocks must be a non-negative base-10 integer");
    entries.push_back({address, count});
  }
  return ProducerDataset(std::move(entries));
}

ProducerDataset read_producers(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io, "cannot read '" + path + "'");
  return parse_producers(in, path);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "f,epsilon,rho,estimate,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << format_number(r.f) << ',' << format_number(r.epsilon) << ',' << format_number(r.rho) << ','
        << format_number(r.estimate) << ',' << format_number(r.ci_low) << ',' << format_number(r.ci_high) << '\n';
  }
}

void write_contributions_csv(std::ostream& out, const BoundEstimate& estimate) {
  out << "k,contribution,standard_error\n";
  for (std::size_t k = 0; k < estimate.contributions.size(); ++k) {
    out << k << ',' << format_number(estimate.contributions[k]) << ','
        << format_number(estimate.contribution_se[k]) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "step,ratio";
  for (std::size_t i = 1; i <= trajectory.nodes; ++i) out << ",beta_" << i;
  out << '\n';
  for (std::size_t t = 0; t <= trajectory.steps(); ++t) {
    out << t << ',' << format_number(trajectory.ratios[t]);
    for (double b : trajectory.row(t)) out << ',' << format_number(b);
    out << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  const std::array<const char*, 3> labels{"100", "50", "33"};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << (i ? "," : "") << "size_" << labels[i] << ",gini_" << labels[i] << ",entropy_" << labels[i];
  }
  out << '\n';
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out << (i ? "," : "") << r.size << ',' << format_number(r.gini) << ',' << format_number(r.entropy);
  }
  out << '\n';
}

}  // namespace decent::cli
