#include "smoothol/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "smoothol/errors.hpp"
#include "smoothol/stats.hpp"

namespace smoothol {

CouplingDraw couple_round(const DensityRatio& density_ratio, double sigma, std::size_t k,
                          const ContextSampler& mu_sampler, const ContextSampler& p_sampler, Rng& rng) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
  CouplingDraw d;
  d.candidates.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    Context z = mu_sampler(rng);
    const double ratio = density_ratio(z);
    if (ratio > 1.0 / sigma + 1e-9) throw SmoothnessViolation();
    if (rng.uniform() < sigma * ratio) d.accepted.push_back(j);
    d.candidates.push_back(std::move(z));
  }
  if (d.accepted.empty()) {
    d.x = p_sampler(rng);
    d.hit = false;
  } else {
    d.x = d.candidates[d.accepted[rng.uniform_int(d.accepted.size())]];
    d.hit = true;
  }
  return d;
}

CouplingConfig concentrated_coupling_config(double sigma, std::size_t k, std::size_t n, std::uint64_t seed) {
  const double size = sigma * static_cast<double>(n);
  const auto a = static_cast<std::size_t>(std::llround(size));
  if (a == 0 || std::abs(size - static_cast<double>(a)) > 1e-9) {
    throw std::invalid_argument("sigma * n must be a positive integer");
  }
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < a; ++i) p[i] = 1.0;
  return {DiscreteMeasure::uniform(n), DiscreteMeasure::from_weights(p), sigma, k, seed};
}

CouplingReport validate_coupling(const CouplingConfig& config, std::uint64_t trials) {
  if (trials < 1000) throw std::invalid_argument("insufficient trials");
  const auto& mu = config.mu;
  const auto& p = config.p;
  if (mu.size() != p.size()) throw std::invalid_argument("mu and p live on different ground sets");
  const std::size_t n = mu.size();

  const DensityRatio ratio = [&](const Context& z) {
    const double m = mu[z.id()];
    return m > 0.0 ? p[z.id()] / m : 0.0;
  };
  const ContextSampler mu_sampler = [&](Rng& r) { return Context::atom(mu.sample(r)); };
  const ContextSampler p_sampler = [&](Rng& r) { return Context::atom(p.sample(r)); };

  std::vector<std::uint64_t> x_counts(n, 0);
  std::vector<std::uint64_t> z_counts(n, 0);
  CouplingReport report;
  report.trials = trials;
  const Rng root(config.seed);
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng = root.split(i);
    const auto d = couple_round(ratio, config.sigma, config.k, mu_sampler, p_sampler, rng);
    ++x_counts[d.x.id()];
    for (const auto& z : d.candidates) ++z_counts[z.id()];
    if (!d.hit) ++report.misses;
  }
  report.x_marginal_pvalue = chi_squared_pvalue(x_counts, p.probabilities());
  report.z_marginal_pvalue = config.k > 0 ? chi_squared_pvalue(z_counts, mu.probabilities()) : 1.0;
  report.miss_rate = static_cast<double>(report.misses) / static_cast<double>(trials);
  report.bound = std::pow(1.0 - config.sigma, static_cast<double>(config.k));
  report.loose_bound = std::exp(-config.sigma * static_cast<double>(config.k));
  return report;
}

}  // namespace smoothol
