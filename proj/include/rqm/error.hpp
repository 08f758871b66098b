#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rqm {

// Error categories map one-to-one onto CLI exit codes.
enum class error_kind : int {
  check_failure = 1,
  configuration = 2,
  numerical = 3,
};

class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

class configuration_error : public error {
 public:
  explicit configuration_error(const std::string& what)
      : error(error_kind::configuration, what) {}
};

// Subproblem argmin is not strongly convex (nonpositive curvature).
class degenerate_subproblem_error : public error {
 public:
  explicit degenerate_subproblem_error(const std::string& what)
      : error(error_kind::configuration, what) {}
};

class shape_error : public error {
 public:
  explicit shape_error(const std::string& what)
      : error(error_kind::configuration, what) {}
};

class parse_error : public error {
 public:
  parse_error(const std::string& path, std::size_t line, const std::string& what)
      : error(error_kind::configuration,
              path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class numerical_failure : public error {
 public:
  numerical_failure(std::size_t iteration, const std::string& what)
      : error(error_kind::numerical,
              "iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class reference_not_converged : public error {
 public:
  explicit reference_not_converged(const std::string& what)
      : error(error_kind::numerical, what) {}
};

namespace detail {

// %.4g, for messages.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

}  // namespace rqm
