#pragma once

#include <optional>
#include <span>

namespace gprc {

struct ReplicationRecord {
  double q_hat = 0.0;                 // prediction upper limit
  double y_next = 0.0;                // realized next value
  std::optional<double> q_star{};     // true upper-alpha quantile, when known
};

// Fraction of replications with q_hat >= y_next.
double empirical_coverage(std::span<const ReplicationRecord> records);

// One-sided interval score: mean of q_hat + (y - q_hat)/alpha when exceeded.
double interval_score(std::span<const ReplicationRecord> records, double alpha);

// Ratio of the interval score to the score of the true quantile.
double relative_score(std::span<const ReplicationRecord> records, double alpha);

}  // namespace gprc
