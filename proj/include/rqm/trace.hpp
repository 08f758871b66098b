#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rqm/types.hpp"

namespace rqm {

struct trace_options {
  std::size_t stride = 10;  // 0 records only the first and last iterate
};

inline bool should_record(const trace_options& opt, std::size_t k, std::size_t last) {
  return k == 0 || k == last || (opt.stride != 0 && k % opt.stride == 0);
}

// One recorded iterate. Quantities a method does not define are NaN.
struct trace_point {
  static constexpr double none = std::numeric_limits<double>::quiet_NaN();

  std::size_t k = 0;
  double objective = none;
  double B_hat = none;
  double gamma = none;
  double A = none;
  double g2_mean = none;  // running mean of ||w||^2 over oracle calls so far
  std::int64_t wall_ns = 0;

  double gamma_over_A() const { return gamma / A; }
};

struct trace {
  std::vector<trace_point> points;
  vector_t final_x;
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

}  // namespace rqm
