#pragma once

#include <span>
#include <vector>

#include "toepspec/matrix.hpp"

namespace toepspec {

/// mean_{i,j} |p_i - q_j| over all n*m pairs.
[[nodiscard]] double mean_abs_diff(std::span<const Complex> p, std::span<const Complex> q);

/// 2 E|X - Y| - E|X - X'| - E|Y - Y'|, exact V-statistic, clamped at 0.
[[nodiscard]] double energy_distance(std::span<const Complex> p, std::span<const Complex> q);

/// Same, with E|Y - Y'| supplied (it is reused across many P).
[[nodiscard]] double energy_distance(std::span<const Complex> p, std::span<const Complex> q,
                                     double q_self);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_p(x) - F_q(x)|.
[[nodiscard]] double ks_distance(std::span<const double> p, std::span<const double> q);

/// Median; averages the two middle values for even sizes. Throws on empty.
[[nodiscard]] double median(std::vector<double> values);

}  // namespace toepspec
