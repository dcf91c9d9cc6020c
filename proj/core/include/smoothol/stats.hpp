#pragma once

#include <cstdint>
#include <span>

namespace smoothol {

/// Pearson goodness-of-fit p-value of `counts` against `probabilities`.
/// Cells with zero expected mass are dropped from the statistic; a nonzero
/// count in such a cell gives p = 0. Degrees of freedom = kept cells - 1.
double chi_squared_pvalue(std::span<const std::uint64_t> counts, std::span<const double> probabilities);

/// Upper tail of the chi-squared distribution.
double chi_squared_sf(double statistic, double dof);

/// sqrt(q (1 - q) / n), the standard deviation of a binomial proportion.
double binomial_std(double q, std::uint64_t n);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> values);

}  // namespace smoothol
