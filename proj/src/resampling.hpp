#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covariance.hpp"
#include "data_types.hpp"
#include "math/rng.hpp"

namespace gprc {

enum class BootstrapKind { iid, paired, residual, block, spatial };

struct BootstrapPlan {
  BootstrapKind kind = BootstrapKind::iid;
  std::size_t replicates = 200;                 // B
  std::optional<std::size_t> block_length;      // required iff kind == block
  std::uint64_t seed = 0;
};

// RNG for replicate b; replicates are reproducible in isolation.
math::Rng replicate_rng(const BootstrapPlan& plan, std::size_t b);

// B index vectors, each of draws_per_replicate uniform draws on {0..n-1}.
std::vector<std::vector<std::size_t>> iid_resample_indices(std::size_t n,
                                                           std::size_t draws_per_replicate,
                                                           const BootstrapPlan& plan);

std::vector<std::vector<double>> iid_bootstrap(std::span<const double> data,
                                               const BootstrapPlan& plan);

// Resamples (x_i, y_i) rows jointly; pairs are never split.
std::vector<RegressionData> paired_bootstrap(const RegressionData& data,
                                             const BootstrapPlan& plan);

// replicate[i] = fitted[i] + resampled residual; the design stays fixed.
std::vector<std::vector<double>> residual_bootstrap(std::span<const double> fitted,
                                                    std::span<const double> residuals,
                                                    const BootstrapPlan& plan);

// Kuensch moving-block bootstrap: ceil(n/len) overlapping blocks with uniform
// starting points, concatenated and truncated to length n.
std::vector<std::vector<double>> block_bootstrap(std::span<const double> series,
                                                 const BootstrapPlan& plan);

// round(n^(1/3)), at least 1.
std::size_t default_block_length(std::size_t n);

// Semi-parametric spatial bootstrap: whiten the observed field with the
// estimated covariance square root, resample n+1 residuals with replacement,
// recolor through the (n+1) x (n+1) factor and add the mean.  sites holds the
// n observation locations plus the prediction target last; each replicate has
// length n+1 with the bootstrap "truth" at the target in the final entry.
std::vector<std::vector<double>> spatial_semiparametric_bootstrap(
    std::span<const Point> sites, std::span<const double> y,
    const SpatialTheta& theta_hat, const BootstrapPlan& plan);

// Deterministic pieces of the spatial engine, exposed for verification.
std::vector<double> spatial_whiten(const math::Matrix& chol_n, double mu,
                                   std::span<const double> y);
std::vector<double> spatial_recolor(const math::Matrix& chol_np1, double mu,
                                    std::span<const double> residuals,
                                    std::span<const std::size_t> indices);

}  // namespace gprc
