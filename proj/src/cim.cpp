#include "caeac/cim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace caeac {
namespace {

void check_same_dim(std::span<const double> x, std::span<const double> y) {
  if (x.empty()) throw std::invalid_argument("cim: empty input vectors");
  if (x.size() != y.size())
    throw std::invalid_argument("cim: dimension mismatch between inputs");
}

// (4/(2+m))^(1/(4+m)) * lambda^(-1/(4+m)) — the bandwidth scale factor for an
// m-attribute kernel.
double bandwidth_scale(std::size_t m, std::size_t lambda) {
  const double e = 1.0 / (4.0 + static_cast<double>(m));
  return std::pow(4.0 / (2.0 + static_cast<double>(m)), e) *
         std::pow(static_cast<double>(lambda), -e);
}

std::vector<double> population_stddev(
    std::span<const std::vector<double>> window) {
  if (window.empty())
    throw std::invalid_argument("estimate_bandwidth: empty window");
  const std::size_t d = window.front().size();
  if (d == 0) throw std::invalid_argument("estimate_bandwidth: empty points");
  for (const auto& row : window)
    if (row.size() != d)
      throw std::invalid_argument("estimate_bandwidth: ragged window rows");
  const double n = static_cast<double>(window.size());
  std::vector<double> mean(d, 0.0);
  for (const auto& row : window)
    for (std::size_t i = 0; i < d; ++i) mean[i] += row[i];
  for (double& m : mean) m /= n;
  std::vector<double> var(d, 0.0);
  for (const auto& row : window)
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = row[i] - mean[i];
      var[i] += diff * diff;
    }
  std::vector<double> sd(d);
  for (std::size_t i = 0; i < d; ++i) sd[i] = std::sqrt(var[i] / n);
  return sd;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double gaussian_kernel(double u, double v, double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  const double diff = u - v;
  return std::exp(-(diff * diff) / (2.0 * sigma * sigma));
}

double cim(std::span<const double> x, std::span<const double> y, double sigma) {
  check_same_dim(x, y);
  double kernel_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    kernel_sum += gaussian_kernel(x[i], y[i], sigma);
  const double inner = 1.0 - kernel_sum / static_cast<double>(x.size());
  return std::sqrt(std::max(0.0, inner));
}

double cim_individual(std::span<const double> x, std::span<const double> y,
                      std::span<const double> sigma_vec) {
  check_same_dim(x, y);
  if (sigma_vec.size() != x.size())
    throw std::invalid_argument("cim_individual: bandwidth dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double inner = 1.0 - gaussian_kernel(x[i], y[i], sigma_vec[i]);
    total += std::sqrt(std::max(0.0, inner));
  }
  return total / static_cast<double>(x.size());
}

double cim_clustering(std::span<const double> x, std::span<const double> y,
                      const AttributeGrouping& grouping,
                      std::span<const double> sigma_groups) {
  check_same_dim(x, y);
  if (grouping.attribute_count() != x.size())
    throw std::invalid_argument("cim_clustering: grouping dimension mismatch");
  if (sigma_groups.size() != grouping.group_count())
    throw std::invalid_argument("cim_clustering: one bandwidth per group required");
  double total = 0.0;
  for (std::size_t j = 0; j < grouping.group_count(); ++j) {
    const auto& group = grouping.groups()[j];
    double kernel_sum = 0.0;
    for (std::size_t attr : group)
      kernel_sum += gaussian_kernel(x[attr], y[attr], sigma_groups[j]);
    const double inner = 1.0 - kernel_sum / static_cast<double>(group.size());
    total += std::sqrt(std::max(0.0, inner));
  }
  return total / static_cast<double>(grouping.group_count());
}

BandwidthEstimate estimate_bandwidth(std::span<const std::vector<double>> window,
                                     std::size_t lambda) {
  if (lambda < 1)
    throw std::invalid_argument("estimate_bandwidth: lambda must be positive");
  const auto sd = population_stddev(window);
  const double scale = bandwidth_scale(sd.size(), lambda);
  BandwidthEstimate out;
  out.per_attribute.resize(sd.size());
  for (std::size_t i = 0; i < sd.size(); ++i)
    out.per_attribute[i] = std::max(scale * sd[i], kSigmaFloor);
  out.scalar = std::max(median_of(out.per_attribute), kSigmaFloor);
  return out;
}

std::vector<double> estimate_bandwidth_per_attribute(
    std::span<const std::vector<double>> window, std::size_t lambda) {
  return estimate_bandwidth(window, lambda).per_attribute;
}

std::vector<double> estimate_group_bandwidths(
    std::span<const std::vector<double>> window, const AttributeGrouping& grouping,
    std::size_t lambda) {
  if (lambda < 1)
    throw std::invalid_argument("estimate_group_bandwidths: lambda must be positive");
  const auto sd = population_stddev(window);
  if (grouping.attribute_count() != sd.size())
    throw std::invalid_argument(
        "estimate_group_bandwidths: grouping dimension mismatch");
  std::vector<double> out(grouping.group_count());
  for (std::size_t j = 0; j < grouping.group_count(); ++j) {
    const auto& group = grouping.groups()[j];
    double mean_sd = 0.0;
    for (std::size_t attr : group) mean_sd += sd[attr];
    mean_sd /= static_cast<double>(group.size());
    out[j] = std::max(bandwidth_scale(group.size(), lambda) * mean_sd, kSigmaFloor);
  }
  return out;
}

std::vector<double> group_bandwidths_from_attribute_bandwidths(
    std::span<const double> per_attribute, const AttributeGrouping& grouping,
    std::size_t d, std::size_t lambda) {
  if (per_attribute.size() != d || grouping.attribute_count() != d)
    throw std::invalid_argument(
        "group_bandwidths_from_attribute_bandwidths: dimension mismatch");
  const double full_scale = bandwidth_scale(d, lambda);
  std::vector<double> out(grouping.group_count());
  for (std::size_t j = 0; j < grouping.group_count(); ++j) {
    const auto& group = grouping.groups()[j];
    const double ratio = bandwidth_scale(group.size(), lambda) / full_scale;
    double total = 0.0;
    for (std::size_t attr : group) total += ratio * per_attribute[attr];
    out[j] = std::max(total / static_cast<double>(group.size()), kSigmaFloor);
  }
  return out;
}

}  // namespace caeac
