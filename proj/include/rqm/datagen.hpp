#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "rqm/error.hpp"
#include "rqm/random.hpp"
#include "rqm/types.hpp"

namespace rqm {

struct generation_options {
  double outlier_prob = 0.05;
  double noise_std_main = 1.0;
  double noise_std_outlier = 5.0;
  double input_bound = 5.0;
  double coeff_min = 0.5;
  double coeff_max = 2.0;
};

struct ground_truth {
  vector_t coeffs;
  double intercept = 0.0;
  std::uint64_t seed = 0;
  std::size_t nnz = 0;
  generation_options options{};
};

struct dataset {
  matrix_t inputs;  // N x d
  vector_t targets;
  std::optional<ground_truth> truth;  // absent when loaded without sidecar
  std::vector<bool> outliers;          // generation-time only, not persisted

  std::size_t samples() const { return static_cast<std::size_t>(inputs.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(inputs.cols()); }
};

namespace detail {

template <typename Rng>
double signed_magnitude(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution negative(0.5);
  const double m = mag(rng);
  return negative(rng) ? -m : m;
}

}  // namespace detail

// Sparse linear model with uniform inputs and a two-component Gaussian noise
// mixture. Draw order on the data stream: support (partial Fisher-Yates),
// nonzero coefficients, intercept, then per sample: inputs, outlier flag, noise.
inline dataset generate(std::uint64_t seed, std::size_t n_samples, std::size_t dim, std::size_t nnz,
                        const generation_options& options = {}) {
  if (n_samples == 0 || dim == 0) throw configuration_error("generate: n and dim must be positive");
  if (nnz > dim) {
    throw configuration_error("generate: nnz = " + std::to_string(nnz) + " exceeds dim = " +
                              std::to_string(dim));
  }
  if (options.outlier_prob < 0.0 || options.outlier_prob > 1.0) {
    throw configuration_error("generate: outlier_prob must lie in [0, 1]");
  }
  if (!(options.noise_std_main >= 0.0) || !(options.noise_std_outlier >= 0.0)) {
    throw configuration_error("generate: noise standard deviations must be nonnegative");
  }
  rng_t rng = make_stream(seed, data_stream);

  std::vector<std::size_t> order(dim);
  for (std::size_t j = 0; j < dim; ++j) order[j] = j;
  for (std::size_t j = 0; j < nnz; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, dim - 1);
    std::swap(order[j], order[pick(rng)]);
  }

  ground_truth truth;
  truth.seed = seed;
  truth.nnz = nnz;
  truth.options = options;
  truth.coeffs = vector_t::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < nnz; ++j) {
    truth.coeffs[static_cast<Eigen::Index>(order[j])] =
        detail::signed_magnitude(rng, options.coeff_min, options.coeff_max);
  }
  truth.intercept = detail::signed_magnitude(rng, options.coeff_min, options.coeff_max);

  dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(dim));
  data.targets.resize(static_cast<Eigen::Index>(n_samples));
  data.outliers.assign(n_samples, false);
  std::uniform_real_distribution<double> input(-options.input_bound, options.input_bound);
  std::bernoulli_distribution outlier(options.outlier_prob);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (Eigen::Index i = 0; i < data.inputs.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.inputs.cols(); ++j) data.inputs(i, j) = input(rng);
    const bool is_outlier = outlier(rng);
    data.outliers[static_cast<std::size_t>(i)] = is_outlier;
    const double sd = is_outlier ? options.noise_std_outlier : options.noise_std_main;
    data.targets[i] = data.inputs.row(i).dot(truth.coeffs) + truth.intercept + sd * noise(rng);
  }
  data.truth = std::move(truth);
  return data;
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

inline nlohmann::json to_json(const ground_truth& t) {
  nlohmann::json j;
  j["seed"] = t.seed;
  j["rng"] = std::string(rng_algorithm);
  j["data_stream"] = data_stream;
  j["true_coeffs"] = std::vector<double>(t.coeffs.data(), t.coeffs.data() + t.coeffs.size());
  j["true_intercept"] = t.intercept;
  j["nnz"] = t.nnz;
  j["outlier_prob"] = t.options.outlier_prob;
  j["noise_std_main"] = t.options.noise_std_main;
  j["noise_std_outlier"] = t.options.noise_std_outlier;
  j["input_bound"] = t.options.input_bound;
  j["coeff_range"] = {t.options.coeff_min, t.options.coeff_max};
  return j;
}

inline ground_truth ground_truth_from_json(const nlohmann::json& j) {
  ground_truth t;
  t.seed = j.at("seed").get<std::uint64_t>();
  const auto coeffs = j.at("true_coeffs").get<std::vector<double>>();
  t.coeffs = Eigen::Map<const vector_t>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  t.intercept = j.at("true_intercept").get<double>();
  t.nnz = j.value("nnz", std::size_t{0});
  t.options.outlier_prob = j.value("outlier_prob", t.options.outlier_prob);
  t.options.noise_std_main = j.value("noise_std_main", t.options.noise_std_main);
  t.options.noise_std_outlier = j.value("noise_std_outlier", t.options.noise_std_outlier);
  t.options.input_bound = j.value("input_bound", t.options.input_bound);
  return t;
}

inline void write_csv(const dataset& data, std::ostream& out) {
  const auto d = data.inputs.cols();
  for (Eigen::Index j = 0; j < d; ++j) out << "x_" << (j + 1) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < data.inputs.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out << format_double(data.inputs(i, j)) << ',';
    out << format_double(data.targets[i]) << '\n';
  }
}

// Writes `path` and, when ground truth is known, `path`.meta.json.
inline void write_csv(const dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw configuration_error("cannot write '" + path + "'");
  write_csv(data, out);
  if (data.truth) {
    std::ofstream meta(sidecar_path(path), std::ios::binary);
    if (!meta) throw configuration_error("cannot write '" + sidecar_path(path) + "'");
    meta << to_json(*data.truth).dump(2) << '\n';
  }
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

// Reads x_1..x_d,y with a header line. `expected_dim`, when given, must
// match the file. The JSON sidecar is optional; without it `truth` is empty.
inline dataset read_csv(const std::string& path, std::optional<std::size_t> expected_dim = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw configuration_error("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw parse_error(path, 1, "missing header");
  const auto header = detail::split_commas(detail::trim(line));
  if (header.size() < 2) throw parse_error(path, 1, "header needs at least one input column and y");
  const std::size_t columns = expected_dim ? *expected_dim + 1 : header.size();
  if (header.size() != columns) {
    throw parse_error(path, 1, "expected " + std::to_string(columns) + " columns, found " +
                                   std::to_string(header.size()));
  }

  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto cells = detail::split_commas(trimmed);
    if (cells.size() != columns) {
      throw parse_error(path, lineno, "expected " + std::to_string(columns) + " columns, found " +
                                          std::to_string(cells.size()));
    }
    for (auto cell : cells) {
      cell = detail::trim(cell);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw parse_error(path, lineno, "non-numeric value '" + std::string(cell) + "'");
      }
      values.push_back(v);
    }
  }
  const auto rows = static_cast<Eigen::Index>(values.size() / columns);
  if (rows == 0) throw parse_error(path, lineno, "no samples");
  const auto d = static_cast<Eigen::Index>(columns - 1);

  dataset data;
  data.inputs.resize(rows, d);
  data.targets.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double* row = values.data() + i * static_cast<Eigen::Index>(columns);
    for (Eigen::Index j = 0; j < d; ++j) data.inputs(i, j) = row[j];
    data.targets[i] = row[d];
  }

  const auto meta = sidecar_path(path);
  if (std::filesystem::exists(meta)) {
    std::ifstream min(meta);
    try {
      data.truth = ground_truth_from_json(nlohmann::json::parse(min));
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(meta, 1, e.what());
    }
    if (data.truth->coeffs.size() != d) throw parse_error(meta, 1, "true_coeffs dimension mismatch");
  }
  return data;
}

}  // namespace rqm
