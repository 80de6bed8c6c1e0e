#include "distributions.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "wavelink/error.hpp"

namespace wavelink::detail {

double normal_two_sided_critical(double confidence) {
  require(confidence > 0.0 && confidence < 1.0, ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
  boost::math::normal_distribution<> normal;
  return boost::math::quantile(normal, 1.0 - (1.0 - confidence) / 2.0);
}

double normal_two_sided_p(double z) {
  if (!std::isfinite(z)) return std::isnan(z) ? 1.0 : 0.0;
  boost::math::normal_distribution<> normal;
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(normal, std::abs(z))), 0.0, 1.0);
}

double student_t_two_sided_p(double t, double dof) {
  if (!std::isfinite(t)) return std::isnan(t) ? 1.0 : 0.0;
  boost::math::students_t_distribution<> dist(dof);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
}

double chi_squared_quantile(double dof, double p) {
  boost::math::chi_squared_distribution<> dist(dof);
  return boost::math::quantile(dist, p);
}

Interval fisher_interval(double r, double n, double confidence) {
  const double z = normal_two_sided_critical(confidence);
  if (n <= 3.0) return {-1.0, 1.0};
  if (std::abs(r) >= 1.0) return {r, r};
  const double centre = std::atanh(r);
  const double half = z / std::sqrt(n - 3.0);
  return {std::tanh(centre - half), std::tanh(centre + half)};
}

}  // namespace wavelink::detail
