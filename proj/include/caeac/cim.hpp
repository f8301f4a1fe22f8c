#pragma once
// Correntropy-induced metric (CIM) similarity measures and kernel-density
// bandwidth estimation. Three CIM forms are provided:
//   cim            — single common bandwidth, kernels averaged across attributes
//   cim_individual — one bandwidth per attribute, per-attribute CIMs averaged
//   cim_clustering — attributes partitioned into groups, one bandwidth per
//                    group, per-group CIMs averaged
// All kernels are Gaussian without the normalizing coefficient, so every CIM
// value lies in [0, 1] (0 = identical inputs).

#include <cstddef>
#include <span>
#include <vector>

#include "caeac/grouping.hpp"

namespace caeac {

// Smallest admissible bandwidth. Estimators floor at this value so constant
// attributes (zero spread) still yield a well-defined kernel.
inline constexpr double kSigmaFloor = 1e-6;

// exp(-(u - v)^2 / (2 sigma^2)). Throws std::invalid_argument when sigma <= 0.
double gaussian_kernel(double u, double v, double sigma);

// sqrt(1 - mean_i kernel(x_i, y_i, sigma)). Throws on dimension mismatch,
// empty input, or sigma <= 0.
double cim(std::span<const double> x, std::span<const double> y, double sigma);

// mean_i sqrt(1 - kernel(x_i, y_i, sigma_vec_i)).
double cim_individual(std::span<const double> x, std::span<const double> y,
                      std::span<const double> sigma_vec);

// mean_j sqrt(1 - mean_{i in group j} kernel(x_i, y_i, sigma_groups_j)).
// `grouping` must partition {0..d-1}; sigma_groups has one entry per group.
double cim_clustering(std::span<const double> x, std::span<const double> y,
                      const AttributeGrouping& grouping,
                      std::span<const double> sigma_groups);

struct BandwidthEstimate {
  std::vector<double> per_attribute;  // floored per-attribute bandwidths
  double scalar = 0.0;                // median of per_attribute
};

// Silverman-style bandwidth from a window of d-dimensional points:
//   per_attribute[i] = (4/(2+d))^(1/(4+d)) * std_i * lambda^(-1/(4+d))
// with population standard deviation over the window, floored at kSigmaFloor;
// scalar = median(per_attribute). `lambda` is the configured model lambda even
// when the window holds fewer points. Throws on an empty window, ragged rows,
// or lambda < 1.
BandwidthEstimate estimate_bandwidth(std::span<const std::vector<double>> window,
                                     std::size_t lambda);

// The per-attribute vector of estimate_bandwidth.
std::vector<double> estimate_bandwidth_per_attribute(
    std::span<const std::vector<double>> window, std::size_t lambda);

// Per-group bandwidths: group j of size d_j gets
//   sigma_j = (4/(2+d_j))^(1/(4+d_j)) * mean_{i in j}(std_i) * lambda^(-1/(4+d_j)),
// floored at kSigmaFloor.
std::vector<double> estimate_group_bandwidths(
    std::span<const std::vector<double>> window, const AttributeGrouping& grouping,
    std::size_t lambda);

// Re-derives per-group bandwidths from stored per-attribute bandwidths without
// the original window: each attribute's spread is recovered by dividing out the
// d-attribute scale factor, then re-scaled with the group-size exponent.
// Exactly equals estimate_group_bandwidths on the same window when no floor was
// hit. `d` is the full attribute count the per-attribute values were computed
// with.
std::vector<double> group_bandwidths_from_attribute_bandwidths(
    std::span<const double> per_attribute, const AttributeGrouping& grouping,
    std::size_t d, std::size_t lambda);

}  // namespace caeac
