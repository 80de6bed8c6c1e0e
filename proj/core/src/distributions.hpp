#pragma once

#include <cstddef>

namespace wavelink::detail {

// Upper quantile z_{1-(1-confidence)/2} of the standard normal.
double normal_two_sided_critical(double confidence);
double normal_two_sided_p(double z);
double student_t_two_sided_p(double t, double dof);
double chi_squared_quantile(double dof, double p);

// Fisher-z interval for a correlation estimate with `n` effective samples.
// Falls back to [-1, 1] when n <= 3 and to a point interval at |r| = 1.
struct Interval {
  double low;
  double high;
};
Interval fisher_interval(double r, double n, double confidence);

}  // namespace wavelink::detail
