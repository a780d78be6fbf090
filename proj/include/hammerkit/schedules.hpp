#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hammerkit/errors.hpp"

namespace hammerkit {

// Power-law step and regularization schedules
//   lambda_n = (n+1)^{-a},  theta_n = (n+1)^{-b},  0 < b < a < 1.
struct PowerSchedule {
  double a;
  double b;

  PowerSchedule(double a_, double b_) : a(a_), b(b_) {
    if (!(b > 0.0 && b < a && a < 1.0))
      throw InvalidConfigError("power schedule needs 0 < b < a < 1");
  }

  double lambda_at(std::size_t n) const {
    if (n < 1) throw InvalidConfigError("schedule index starts at 1");
    return std::pow(static_cast<double>(n) + 1.0, -a);
  }

  double theta_at(std::size_t n) const {
    if (n < 1) throw InvalidConfigError("schedule index starts at 1");
    return std::pow(static_cast<double>(n) + 1.0, -b);
  }
};

struct ScheduleReport {
  bool theta_decreasing = false;
  double divergence_partial_sum = 0.0;  // sum_{n<=N} lambda_n theta_n
  double partial_sum_half = 0.0;        // same sum at N/2
  double ratio_condition_value = 0.0;   // ((theta_{n-1}/theta_n) - 1)/(lambda_n theta_n) at N
  double ratio_value_early = 0.0;       // the same ratio at N/10
  std::vector<std::string> flags;
  bool passed = false;
};

namespace detail {

inline ScheduleReport validate_schedule_impl(const std::function<double(std::size_t)>& lambda,
                                             const std::function<double(std::size_t)>& theta,
                                             std::size_t N, bool theta_decreasing_symbolic) {
  if (N < 1000) throw InvalidConfigError("schedule validation horizon must be at least 1000");
  ScheduleReport rep;
  rep.theta_decreasing = theta_decreasing_symbolic;

  double sum = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const double ln = lambda(n), tn = theta(n);
    if (!(ln > 0.0 && ln < 1.0 && tn > 0.0 && tn < 1.0))
      throw InvalidConfigError("schedule values must lie in (0,1)");
    sum += ln * tn;
    if (n == N / 2) rep.partial_sum_half = sum;
  }
  rep.divergence_partial_sum = sum;

  bool ok = true;
  if (!rep.theta_decreasing) {
    rep.flags.push_back("fail: theta is not decreasing to zero");
    ok = false;
  }
  const double growth = (sum - rep.partial_sum_half) / rep.partial_sum_half;
  if (!(growth >= 0.01)) {
    rep.flags.push_back(
        "fail: partial sums of lambda*theta grew by less than 1% between N/2 and N; "
        "divergence evidence is missing");
    ok = false;
  }
  const auto ratio = [&](std::size_t n) {
    return (theta(n - 1) / theta(n) - 1.0) / (lambda(n) * theta(n));
  };
  rep.ratio_value_early = ratio(std::max<std::size_t>(2, N / 10));
  rep.ratio_condition_value = ratio(N);
  if (!(rep.ratio_condition_value < rep.ratio_value_early)) {
    rep.flags.push_back(
        "fail: ((theta_{n-1}/theta_n)-1)/(lambda_n theta_n) is not decreasing toward zero");
    ok = false;
  }
  rep.flags.push_back(
      "warning: the companion requirement sum(lambda_n) < infinity is ignored; it is "
      "incompatible with sum(lambda_n theta_n) = infinity, which these schedules need");
  rep.passed = ok;
  return rep;
}

}  // namespace detail

/*
 * Evidence checks for the three iteration conditions on a finite horizon:
 * theta decreasing to zero, divergence of sum(lambda theta), and the damping
 * ratio tending to zero. For power schedules the ratio behaves like
 * b n^{a+b-1}, so the last check passes exactly when a + b < 1.
 */
inline ScheduleReport validate(const PowerSchedule& s, std::size_t N) {
  return detail::validate_schedule_impl([&](std::size_t n) { return s.lambda_at(n); },
                                        [&](std::size_t n) { return s.theta_at(n); }, N,
                                        /*theta_decreasing_symbolic=*/s.b > 0.0);
}

// Same validator over tabulated schedule arrays (index n = position + 1).
inline ScheduleReport validate_tabulated(const std::vector<double>& lambda,
                                         const std::vector<double>& theta) {
  if (lambda.size() != theta.size())
    throw InvalidConfigError("tabulated schedules must have equal length");
  const std::size_t N = lambda.size();
  bool decreasing = true;
  for (std::size_t i = 1; i < theta.size(); ++i)
    if (!(theta[i] < theta[i - 1])) decreasing = false;
  return detail::validate_schedule_impl([&](std::size_t n) { return lambda[n - 1]; },
                                        [&](std::size_t n) { return theta[n - 1]; }, N,
                                        decreasing);
}

}  // namespace hammerkit
