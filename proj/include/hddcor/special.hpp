#pragma once

namespace hddcor {

// Standard normal distribution.
double normal_cdf(double x);
// 1 - normal_cdf(x), without cancellation in the upper tail.
double normal_sf(double x);
double normal_pdf(double x);
// Inverse of normal_cdf on (0, 1); returns -inf / +inf at 0 / 1.
double normal_quantile(double prob);

// Gamma distribution parameterised by shape and rate (mean shape / rate).
double gamma_cdf(double x, double shape, double rate);
double gamma_sf(double x, double shape, double rate);
double gamma_quantile(double prob, double shape, double rate);

}  // namespace hddcor
