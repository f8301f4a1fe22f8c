#pragma once
// Evaluation metrics: accuracy, normalized mutual information (sqrt
// normalization), adjusted Rand index (pair-count form, exact integer
// arithmetic), and the Friedman rank test with Nemenyi post-hoc critical
// distances.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace caeac {

// Fraction of equal positions. Throws std::invalid_argument on empty or
// unequal-length inputs.
double accuracy(std::span<const std::string> predicted,
                std::span<const std::string> truth);

// Mutual information normalized by sqrt(H(U) * H(V)). Degenerate partitions:
// 1 when both sides are single-cluster, 0 when exactly one side has zero
// entropy. Throws on empty or unequal-length inputs.
double nmi(std::span<const std::string> u, std::span<const std::string> v);

// Adjusted Rand index over pair counts. Returns 1 when the adjustment
// denominator is zero (both all-singletons or both single-cluster). Throws on
// n < 2 or unequal lengths.
double ari(std::span<const std::string> u, std::span<const std::string> v);

struct FriedmanNemenyiResult {
  double statistic = 0.0;         // Friedman chi-square
  double p_value = 1.0;           // chi-square approximation, k-1 dof
  std::vector<double> mean_ranks; // one per algorithm; rank 1 = best
  double critical_distance = 0.0; // Nemenyi CD at the requested alpha
  std::vector<std::vector<bool>> significant;  // |rank_i - rank_j| > CD
};

// `results` is one row per algorithm, one column per measurement; higher
// values are better. Ranks are averaged over ties. Requires >= 2 algorithms,
// >= 2 equal-length columns, alpha = 0.05 and k <= 10 (the tabulated Nemenyi
// range); throws std::invalid_argument otherwise.
FriedmanNemenyiResult friedman_nemenyi(
    std::span<const std::vector<double>> results, double alpha);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a); the
// chi-square survival function is Q(dof/2, x/2). Exposed for tests.
double regularized_gamma_q(double a, double x);

}  // namespace caeac
