#pragma once

#include <string>
#include <vector>

namespace disloc {

/// Finite-data trend verdicts.  "Decreasing" means strictly decreasing over
/// the tail except where consecutive values already sit below the noise
/// floor; "final_below" compares the last value against tol.
struct TrendCheck {
  std::vector<double> values;
  int tail_start = 0;
  double tol = 0.0;
  double floor_value = 0.0;
  bool monotone = false;
  bool final_below = false;
  double final_value = 0.0;

  bool pass() const { return monotone && final_below; }
  std::string describe() const;
};

TrendCheck decreasing_tail(const std::vector<double>& values, double tol,
                           double floor_value, double tail_fraction = 0.5);

/// Strictly increasing over the tail, final value above the threshold.
TrendCheck increasing_tail(const std::vector<double>& values, double threshold,
                           double tail_fraction = 0.5);

} // namespace disloc
