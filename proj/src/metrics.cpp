#include "metrics.hpp"

#include <vector>

#include "error.hpp"

namespace gprc {

namespace {

void check_records(std::span<const ReplicationRecord> records) {
  require(!records.empty(), Status::insufficient_data, "metrics: no records");
}

}  // namespace

double empirical_coverage(std::span<const ReplicationRecord> records) {
  check_records(records);
  std::size_t covered = 0;
  for (const auto& record : records) {
    if (record.q_hat >= record.y_next) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(records.size());
}

double interval_score(std::span<const ReplicationRecord> records, double alpha) {
  check_records(records);
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "interval_score: alpha must lie in (0,1)");
  double total = 0.0;
  for (const auto& record : records) {
    double s = record.q_hat;
    if (record.y_next > record.q_hat) {
      s += (record.y_next - record.q_hat) / alpha;
    }
    total += s;
  }
  return total / static_cast<double>(records.size());
}

double relative_score(std::span<const ReplicationRecord> records, double alpha) {
  check_records(records);
  std::vector<ReplicationRecord> oracle(records.begin(), records.end());
  for (auto& record : oracle) {
    require(record.q_star.has_value(), Status::invalid_argument,
            "relative_score: record is missing the true quantile");
    record.q_hat = *record.q_star;
  }
  return interval_score(records, alpha) / interval_score(oracle, alpha);
}

}  // namespace gprc
