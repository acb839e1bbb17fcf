#include "disloc/trend.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace disloc {

std::string TrendCheck::describe() const {
  std::ostringstream os;
  os << (pass() ? "pass" : "fail") << " (final " << final_value << " vs tol "
     << tol << ", tail " << (monotone ? "monotone" : "non-monotone") << " from index "
     << tail_start << ")";
  return os.str();
}

static int tail_begin(std::size_t n, double fraction) {
  if (n == 0) return 0;
  const auto len = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n) * fraction));
  const auto tail = std::clamp<std::size_t>(len, 1, n);
  return static_cast<int>(n - tail);
}

TrendCheck decreasing_tail(const std::vector<double>& values, double tol,
                           double floor_value, double tail_fraction) {
  TrendCheck t;
  t.values = values;
  t.tol = tol;
  t.floor_value = floor_value;
  if (values.empty()) return t;
  t.tail_start = tail_begin(values.size(), tail_fraction);
  t.monotone = true;
  for (std::size_t i = static_cast<std::size_t>(t.tail_start);
       i + 1 < values.size(); ++i) {
    const bool below_floor =
        std::max(values[i], values[i + 1]) <= floor_value;
    if (!below_floor && !(values[i + 1] < values[i])) t.monotone = false;
  }
  t.final_value = values.back();
  t.final_below = t.final_value <= tol;
  return t;
}

TrendCheck increasing_tail(const std::vector<double>& values, double threshold,
                           double tail_fraction) {
  TrendCheck t;
  t.values = values;
  t.tol = threshold;
  if (values.empty()) return t;
  t.tail_start = tail_begin(values.size(), tail_fraction);
  t.monotone = true;
  for (std::size_t i = static_cast<std::size_t>(t.tail_start);
       i + 1 < values.size(); ++i)
    if (!(values[i + 1] > values[i])) t.monotone = false;
  t.final_value = values.back();
  t.final_below = t.final_value > threshold; // "final beyond threshold" here
  return t;
}

} // namespace disloc
