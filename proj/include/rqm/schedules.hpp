#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rqm/error.hpp"

namespace rqm {

// Control sequences of the quasi-monotone method.
//   corollary_one:      a_k = 1, gamma_k = sqrt(k+1)
//   corollary_two:      a_k = 1, gamma_k = ln(2k+3)
//   quadratic_weights:  a_k = k, A_k = k(k+1)/2, gamma_k = const (10)
//   custom:             user table, extended past its end by the last entry
enum class schedule_kind { corollary_one, corollary_two, quadratic_weights, custom };

inline schedule_kind parse_schedule_kind(std::string_view name) {
  if (name == "cor1") return schedule_kind::corollary_one;
  if (name == "cor2") return schedule_kind::corollary_two;
  if (name == "quadratic") return schedule_kind::quadratic_weights;
  if (name == "custom") return schedule_kind::custom;
  throw configuration_error("unknown schedule kind '" + std::string(name) +
                            "' (expected cor1|cor2|quadratic|custom)");
}

inline std::string_view to_string(schedule_kind kind) {
  switch (kind) {
    case schedule_kind::corollary_one: return "cor1";
    case schedule_kind::corollary_two: return "cor2";
    case schedule_kind::quadratic_weights: return "quadratic";
    case schedule_kind::custom: return "custom";
  }
  return "unknown";
}

struct schedule_weights_t {
  double a;
  double A;
};

inline schedule_weights_t schedule_weights(schedule_kind kind, std::size_t k) {
  const auto kd = static_cast<double>(k);
  switch (kind) {
    case schedule_kind::corollary_one:
    case schedule_kind::corollary_two:
      return {1.0, kd + 1.0};
    case schedule_kind::quadratic_weights:
      return {kd, kd * (kd + 1.0) / 2.0};
    case schedule_kind::custom:
      break;
  }
  throw configuration_error("schedule_weights: kind '" + std::string(to_string(kind)) +
                            "' has no closed form");
}

inline double schedule_gamma(schedule_kind kind, std::size_t k, double gamma_const = 10.0) {
  const auto kd = static_cast<double>(k);
  switch (kind) {
    case schedule_kind::corollary_one: return std::sqrt(kd + 1.0);
    case schedule_kind::corollary_two: return std::log(2.0 * kd + 3.0);
    case schedule_kind::quadratic_weights: return gamma_const;
    case schedule_kind::custom: break;
  }
  throw configuration_error("schedule_gamma: kind '" + std::string(to_string(kind)) +
                            "' has no closed form");
}

// Strong-convexity modulus of A g + gamma Psi.
inline double modulus_mu(double A, double gamma, double sigma, double beta) {
  const double mu = A * sigma + gamma * beta;
  if (!(mu > 0.0)) {
    throw degenerate_subproblem_error("modulus_mu: A*sigma + gamma*beta = " +
                                      std::to_string(mu) + " is not positive");
  }
  return mu;
}

class schedule {
 public:
  static schedule corollary_one(double beta = 1.0) {
    return schedule(schedule_kind::corollary_one, 10.0, beta);
  }
  static schedule corollary_two(double beta = 1.0) {
    return schedule(schedule_kind::corollary_two, 10.0, beta);
  }
  static schedule quadratic(double gamma_const = 10.0, double beta = 1.0) {
    if (!(gamma_const > 0.0)) {
      throw configuration_error("quadratic schedule: gamma_const must be positive");
    }
    return schedule(schedule_kind::quadratic_weights, gamma_const, beta);
  }

  // Tables are validated eagerly: a_0 >= 0, a_k > 0 for k >= 1,
  // gamma_k > 0 and nondecreasing.
  static schedule custom(std::vector<double> a, std::vector<double> gamma,
                         double beta = 1.0) {
    if (a.empty() || a.size() != gamma.size()) {
      throw configuration_error("custom schedule: a and gamma tables must be nonempty and equal length");
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      const bool ok = k == 0 ? a[k] >= 0.0 : a[k] > 0.0;
      if (!ok || !std::isfinite(a[k])) {
        throw configuration_error("custom schedule: invalid weight a_" + std::to_string(k));
      }
      if (!(gamma[k] > 0.0) || !std::isfinite(gamma[k])) {
        throw configuration_error("custom schedule: gamma_" + std::to_string(k) +
                                  " must be positive");
      }
      if (k > 0 && gamma[k] < gamma[k - 1]) {
        throw configuration_error("custom schedule: gamma is decreasing at k=" +
                                  std::to_string(k));
      }
    }
    schedule s(schedule_kind::custom, 10.0, beta);
    s.prefix_.resize(a.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s.prefix_[k] = acc += a[k];
    s.a_ = std::move(a);
    s.gamma_ = std::move(gamma);
    return s;
  }

  // One entry per line: either "gamma" (a_k = 1) or "a,gamma".
  // Blank lines and lines starting with '#' are skipped.
  static schedule load_custom(const std::string& path, double beta = 1.0) {
    std::ifstream in(path);
    if (!in) throw configuration_error("cannot open custom schedule file '" + path + "'");
    std::vector<double> a, gamma;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      for (auto& c : line) {
        if (c == ',') c = ' ';
      }
      std::istringstream row(line);
      std::vector<double> values;
      double v;
      while (row >> v) values.push_back(v);
      if (!row.eof() || values.empty() || values.size() > 2) {
        throw parse_error(path, lineno, "expected 'gamma' or 'a,gamma'");
      }
      a.push_back(values.size() == 2 ? values[0] : 1.0);
      gamma.push_back(values.back());
    }
    return custom(std::move(a), std::move(gamma), beta);
  }

  schedule_kind kind() const { return kind_; }
  double beta() const { return beta_; }
  double gamma_const() const { return gamma_const_; }

  schedule_weights_t weights(std::size_t k) const {
    if (kind_ != schedule_kind::custom) return schedule_weights(kind_, k);
    const std::size_t last = a_.size() - 1;
    if (k <= last) return {a_[k], prefix_[k]};
    return {a_[last], prefix_[last] + static_cast<double>(k - last) * a_[last]};
  }

  double a(std::size_t k) const { return weights(k).a; }
  double A(std::size_t k) const { return weights(k).A; }

  double gamma(std::size_t k) const {
    if (kind_ != schedule_kind::custom) return schedule_gamma(kind_, k, gamma_const_);
    return gamma_[std::min(k, gamma_.size() - 1)];
  }

  double mu(std::size_t k, double sigma) const {
    return modulus_mu(A(k), gamma(k), sigma, beta_);
  }

 private:
  schedule(schedule_kind kind, double gamma_const, double beta)
      : kind_(kind), gamma_const_(gamma_const), beta_(beta) {
    if (!(beta > 0.0)) throw configuration_error("schedule: beta must be positive");
  }

  schedule_kind kind_;
  double gamma_const_;
  double beta_;
  std::vector<double> a_, gamma_, prefix_;
};

}  // namespace rqm
