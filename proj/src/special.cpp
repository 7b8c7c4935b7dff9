#include "hddcor/special.hpp"

#include "hddcor/error.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>

namespace hddcor {

namespace {

const boost::math::normal_distribution<double> kStandardNormal(0.0, 1.0);

boost::math::gamma_distribution<double> make_gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw InputError("gamma distribution needs finite positive shape and rate");
  }
  return boost::math::gamma_distribution<double>(shape, 1.0 / rate);
}

void require_finite(double x) {
  if (std::isnan(x)) throw InputError("NaN argument to a distribution function");
}

}  // namespace

double normal_cdf(double x) {
  require_finite(x);
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return boost::math::cdf(kStandardNormal, x);
}

double normal_sf(double x) {
  require_finite(x);
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  return boost::math::cdf(boost::math::complement(kStandardNormal, x));
}

double normal_pdf(double x) {
  require_finite(x);
  if (std::isinf(x)) return 0.0;
  return boost::math::pdf(kStandardNormal, x);
}

double normal_quantile(double prob) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("probability outside [0, 1]");
  if (prob == 0.0) return -std::numeric_limits<double>::infinity();
  if (prob == 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(kStandardNormal, prob);
}

double gamma_cdf(double x, double shape, double rate) {
  const auto dist = make_gamma(shape, rate);
  require_finite(x);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::cdf(dist, x);
}

double gamma_sf(double x, double shape, double rate) {
  const auto dist = make_gamma(shape, rate);
  require_finite(x);
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::cdf(boost::math::complement(dist, x));
}

double gamma_quantile(double prob, double shape, double rate) {
  const auto dist = make_gamma(shape, rate);
  if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("probability outside [0, 1]");
  if (prob == 0.0) return 0.0;
  if (prob == 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(dist, prob);
}

}  // namespace hddcor
