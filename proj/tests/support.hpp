// Shared test helpers: independent brute-force oracles and data generators.
//
// The oracles deliberately re-derive every quantity from its defining formula
// with long-double accumulation and different looping/accumulation structure
// than the library, so agreement is meaningful.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "caeac/caea.hpp"
#include "caeac/dataset.hpp"
#include "caeac/grouping.hpp"
#include "caeac/rng.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Similarity oracles
// ---------------------------------------------------------------------------

inline long double oracle_kernel(long double diff, long double sigma) {
  return std::exp(-(diff * diff) / (2.0L * sigma * sigma));
}

inline double oracle_cim(std::span<const double> x, std::span<const double> y,
                         double sigma) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += oracle_kernel(static_cast<long double>(x[i]) - y[i], sigma);
  const long double inside = 1.0L - acc / static_cast<long double>(x.size());
  return static_cast<double>(std::sqrt(inside < 0.0L ? 0.0L : inside));
}

inline double oracle_cim_individual(std::span<const double> x,
                                    std::span<const double> y,
                                    std::span<const double> sigmas) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double k =
        oracle_kernel(static_cast<long double>(x[i]) - y[i], sigmas[i]);
    const long double inside = 1.0L - k;
    acc += std::sqrt(inside < 0.0L ? 0.0L : inside);
  }
  return static_cast<double>(acc / static_cast<long double>(x.size()));
}

inline double oracle_cim_clustering(std::span<const double> x,
                                    std::span<const double> y,
                                    const caeac::AttributeGrouping& grouping,
                                    std::span<const double> sigma_groups) {
  long double acc = 0.0L;
  const auto& groups = grouping.groups();
  for (std::size_t j = 0; j < groups.size(); ++j) {
    long double kernel_sum = 0.0L;
    for (const std::size_t attr : groups[j])
      kernel_sum += oracle_kernel(static_cast<long double>(x[attr]) - y[attr],
                                  sigma_groups[j]);
    const long double inside =
        1.0L - kernel_sum / static_cast<long double>(groups[j].size());
    acc += std::sqrt(inside < 0.0L ? 0.0L : inside);
  }
  return static_cast<double>(acc / static_cast<long double>(groups.size()));
}

// Plug-in bandwidth rule, re-derived: per-attribute population standard
// deviation scaled by (4/(2+m))^{1/(4+m)} * lambda^{-1/(4+m)} with m = the
// full dimensionality for the per-attribute/scalar forms.
inline long double oracle_bandwidth_scale(std::size_t m, std::size_t lambda) {
  const long double md = static_cast<long double>(m);
  const long double exponent = 1.0L / (4.0L + md);
  return std::pow(4.0L / (2.0L + md), exponent) *
         std::pow(static_cast<long double>(lambda), -exponent);
}

inline std::vector<double> oracle_bandwidth_per_attribute(
    const std::vector<std::vector<double>>& window, std::size_t lambda) {
  const std::size_t n = window.size();
  const std::size_t d = window.front().size();
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    long double mean = 0.0L;
    for (const auto& row : window) mean += row[i];
    mean /= static_cast<long double>(n);
    long double ss = 0.0L;
    for (const auto& row : window) {
      const long double diff = row[i] - mean;
      ss += diff * diff;
    }
    const long double stddev = std::sqrt(ss / static_cast<long double>(n));
    long double sigma = oracle_bandwidth_scale(d, lambda) * stddev;
    if (sigma < 1e-6L) sigma = 1e-6L;
    out[i] = static_cast<double>(sigma);
  }
  return out;
}

inline double oracle_bandwidth_scalar(
    const std::vector<std::vector<double>>& window, std::size_t lambda) {
  std::vector<double> per = oracle_bandwidth_per_attribute(window, lambda);
  std::sort(per.begin(), per.end());
  const std::size_t n = per.size();
  double median = (n % 2 == 1) ? per[n / 2]
                               : (per[n / 2 - 1] + per[n / 2]) / 2.0;
  if (median < 1e-6) median = 1e-6;
  return median;
}

// ---------------------------------------------------------------------------
// Partition-metric oracles
// ---------------------------------------------------------------------------

// Adjusted Rand index via exhaustive pair enumeration (the four pair-agreement
// buckets), rather than contingency-table sums.
inline double oracle_ari_pairs(const std::vector<std::string>& u,
                               const std::vector<std::string>& v) {
  long double s11 = 0, s00 = 0, s10 = 0, s01 = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      const bool same_u = u[i] == u[j];
      const bool same_v = v[i] == v[j];
      if (same_u && same_v) ++s11;
      else if (!same_u && !same_v) ++s00;
      else if (same_u) ++s10;
      else ++s01;
    }
  const long double numerator = 2.0L * (s11 * s00 - s10 * s01);
  const long double denominator =
      (s11 + s10) * (s10 + s00) + (s11 + s01) * (s01 + s00);
  if (denominator == 0.0L) return 1.0;
  return static_cast<double>(numerator / denominator);
}

// NMI with sqrt(H_U * H_V) normalization, straight from the definition.
inline double oracle_nmi_direct(const std::vector<std::string>& u,
                                const std::vector<std::string>& v) {
  const long double n = static_cast<long double>(u.size());
  std::map<std::string, long double> count_u, count_v;
  std::map<std::pair<std::string, std::string>, long double> joint;
  for (std::size_t i = 0; i < u.size(); ++i) {
    count_u[u[i]] += 1.0L;
    count_v[v[i]] += 1.0L;
    joint[{u[i], v[i]}] += 1.0L;
  }
  long double h_u = 0.0L, h_v = 0.0L, mi = 0.0L;
  for (const auto& [label, c] : count_u) h_u -= (c / n) * std::log(c / n);
  for (const auto& [label, c] : count_v) h_v -= (c / n) * std::log(c / n);
  for (const auto& [pair, c] : joint) {
    const long double pij = c / n;
    const long double pi = count_u.at(pair.first) / n;
    const long double qj = count_v.at(pair.second) / n;
    mi += pij * std::log(pij / (pi * qj));
  }
  if (h_u == 0.0L || h_v == 0.0L)
    return (count_u.size() == 1 && count_v.size() == 1) ? 1.0 : 0.0;
  long double value = mi / std::sqrt(h_u * h_v);
  if (value < 0.0L) value = 0.0L;
  if (value > 1.0L) value = 1.0L;
  return static_cast<double>(value);
}

// ---------------------------------------------------------------------------
// Friedman oracle: counting-based tie-averaged ranks (no sorting) and the
// rank-sum form of the statistic.
// ---------------------------------------------------------------------------

inline std::vector<double> oracle_friedman_mean_ranks(
    const std::vector<std::vector<double>>& results) {
  const std::size_t k = results.size();
  const std::size_t n = results.front().size();
  std::vector<double> mean_ranks(k, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t greater = 0, equal = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (results[j][col] > results[i][col]) ++greater;
        if (results[j][col] == results[i][col]) ++equal;  // includes self
      }
      mean_ranks[i] += static_cast<double>(greater) +
                       (static_cast<double>(equal) + 1.0) / 2.0;
    }
  }
  for (double& r : mean_ranks) r /= static_cast<double>(n);
  return mean_ranks;
}

inline double oracle_friedman_statistic(
    const std::vector<std::vector<double>>& results) {
  const long double k = static_cast<long double>(results.size());
  const long double n = static_cast<long double>(results.front().size());
  const std::vector<double> mean_ranks = oracle_friedman_mean_ranks(results);
  long double sum_sq_rank_sums = 0.0L;
  for (const double mean_rank : mean_ranks) {
    const long double rank_sum = static_cast<long double>(mean_rank) * n;
    sum_sq_rank_sums += rank_sum * rank_sum;
  }
  const long double stat =
      12.0L / (n * k * (k + 1.0L)) * sum_sq_rank_sums - 3.0L * n * (k + 1.0L);
  return static_cast<double>(stat < 0.0L ? 0.0L : stat);
}

// ---------------------------------------------------------------------------
// Data generators
// ---------------------------------------------------------------------------

inline std::vector<double> random_vector(std::mt19937_64& eng, std::size_t d,
                                         double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(d);
  for (double& value : out) value = dist(eng);
  return out;
}

inline std::vector<std::vector<double>> random_window(std::mt19937_64& eng,
                                                      std::size_t n, std::size_t d,
                                                      double lo, double hi) {
  std::vector<std::vector<double>> out(n);
  for (auto& row : out) row = random_vector(eng, d, lo, hi);
  return out;
}

inline std::vector<std::string> random_partition(std::mt19937_64& eng,
                                                 std::size_t n,
                                                 std::size_t max_labels) {
  std::uniform_int_distribution<std::size_t> dist(0, max_labels - 1);
  std::vector<std::string> out(n);
  for (auto& label : out) label = "c" + std::to_string(dist(eng));
  return out;
}

// Two unit-variance Gaussian blobs whose centers sit `separation` standard
// deviations apart along the main diagonal, `per_class` points each, shuffled.
inline caeac::Dataset make_diagonal_blobs(std::uint64_t seed,
                                          std::size_t per_class = 200,
                                          double separation = 20.0) {
  std::mt19937_64 eng(seed);
  const double offset = separation / std::sqrt(2.0);
  caeac::Dataset dataset;
  dataset.name = "diagonal-blobs";
  dataset.provenance = "synthetic";
  for (std::size_t i = 0; i < per_class; ++i) {
    dataset.features.push_back(
        {caeac::standard_normal(eng), caeac::standard_normal(eng)});
    dataset.labels.emplace_back("alpha");
    dataset.features.push_back({offset + caeac::standard_normal(eng),
                                offset + caeac::standard_normal(eng)});
    dataset.labels.emplace_back("beta");
  }
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  caeac::fisher_yates(order, eng);
  caeac::Dataset shuffled = dataset;
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.features[i] = dataset.features[order[i]];
    shuffled.labels[i] = dataset.labels[order[i]];
  }
  return shuffled;
}

// Sum of all node win counters across a model.
inline std::uint64_t counter_sum(const caeac::CaeaModel& model) {
  std::uint64_t total = 0;
  for (const auto& node : model.nodes()) total += node.counter;
  return total;
}

}  // namespace testsupport
