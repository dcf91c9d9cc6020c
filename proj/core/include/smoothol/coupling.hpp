#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "smoothol/context.hpp"
#include "smoothol/rng.hpp"

namespace smoothol {

struct CouplingDraw {
  Context x;
  std::vector<Context> candidates;    // Z_1..Z_k
  std::vector<std::size_t> accepted;  // indices into candidates, ascending
  bool hit = false;                   // x taken from the accepted set
};

using DensityRatio = std::function<double(const Context&)>;
using ContextSampler = std::function<Context(Rng&)>;

/// One round of the rejection coupling: Z_j ~ mu i.i.d., keep j with
/// probability sigma * dp/dmu(Z_j); x is uniform over the kept candidates,
/// or drawn from p when none is kept. Throws SmoothnessViolation when the
/// ratio exceeds 1/sigma + 1e-9.
CouplingDraw couple_round(const DensityRatio& density_ratio, double sigma, std::size_t k,
                          const ContextSampler& mu_sampler, const ContextSampler& p_sampler, Rng& rng);

struct CouplingConfig {
  DiscreteMeasure mu;
  DiscreteMeasure p;
  double sigma = 1.0;
  std::size_t k = 1;
  std::uint64_t seed = 0;
};

/// p = mu / sigma on the first sigma * n atoms of a uniform mu on n atoms,
/// the law that makes the miss probability exactly (1 - sigma)^k.
/// sigma * n must be a positive integer.
CouplingConfig concentrated_coupling_config(double sigma, std::size_t k, std::size_t n, std::uint64_t seed = 0);

struct CouplingReport {
  double x_marginal_pvalue = 0.0;
  double z_marginal_pvalue = 0.0;
  double miss_rate = 0.0;
  double bound = 0.0;        // (1 - sigma)^k
  double loose_bound = 0.0;  // exp(-sigma k)
  std::uint64_t trials = 0;
  std::uint64_t misses = 0;
};

/// Runs `trials` independent rounds (trial i uses stream split(i) of the
/// seed) and tests both marginals with a chi-squared goodness of fit.
/// Throws std::invalid_argument("insufficient trials") below 1000.
CouplingReport validate_coupling(const CouplingConfig& config, std::uint64_t trials);

}  // namespace smoothol
