#pragma once

namespace nrfdr {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal survival function 1 - Phi(x).
double normal_sf(double x);

/// Standard normal quantile, p in (0,1).
double normal_quantile(double p);

/// Chi-squared survival function P(X > x), dof >= 1.
double chi_squared_sf(double x, int dof);

/// Chi-squared inverse survival: x with P(X > x) = p, p in (0,1).
double chi_squared_isf(double p, int dof);

}  // namespace nrfdr
