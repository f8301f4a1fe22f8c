#include "caeac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace caeac {
namespace {

void check_pairing(std::span<const std::string> a, std::span<const std::string> b,
                   const char* who) {
  if (a.empty())
    throw std::invalid_argument(std::string(who) + ": empty label lists");
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(who) + ": unequal label list lengths");
}

// Contingency table and marginals of two label lists.
struct Contingency {
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> joint;
  std::vector<std::int64_t> row;  // counts per u-cluster
  std::vector<std::int64_t> col;  // counts per v-cluster
  std::int64_t n = 0;
};

Contingency contingency(std::span<const std::string> u,
                        std::span<const std::string> v) {
  std::map<std::string, std::size_t> u_ids, v_ids;
  Contingency table;
  table.n = static_cast<std::int64_t>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto ui = u_ids.emplace(u[i], u_ids.size()).first->second;
    const auto vi = v_ids.emplace(v[i], v_ids.size()).first->second;
    if (ui >= table.row.size()) table.row.push_back(0);
    if (vi >= table.col.size()) table.col.push_back(0);
    ++table.row[ui];
    ++table.col[vi];
    ++table.joint[{ui, vi}];
  }
  return table;
}

std::int64_t pairs(std::int64_t count) { return count * (count - 1) / 2; }

}  // namespace

double accuracy(std::span<const std::string> predicted,
                std::span<const std::string> truth) {
  check_pairing(predicted, truth, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double nmi(std::span<const std::string> u, std::span<const std::string> v) {
  check_pairing(u, v, "nmi");
  const auto table = contingency(u, v);
  const double n = static_cast<double>(table.n);
  double h_u = 0.0, h_v = 0.0, mi = 0.0;
  for (const auto count : table.row) {
    const double p = static_cast<double>(count) / n;
    h_u -= p * std::log(p);
  }
  for (const auto count : table.col) {
    const double p = static_cast<double>(count) / n;
    h_v -= p * std::log(p);
  }
  const bool u_single = table.row.size() < 2 || h_u == 0.0;
  const bool v_single = table.col.size() < 2 || h_v == 0.0;
  if (u_single && v_single) return 1.0;
  if (u_single || v_single) return 0.0;
  for (const auto& [cell, count] : table.joint) {
    const double p = static_cast<double>(count) / n;
    const double pu = static_cast<double>(table.row[cell.first]) / n;
    const double pv = static_cast<double>(table.col[cell.second]) / n;
    mi += p * std::log(p / (pu * pv));
  }
  const double value = mi / std::sqrt(h_u * h_v);
  return std::clamp(value, 0.0, 1.0);
}

double ari(std::span<const std::string> u, std::span<const std::string> v) {
  check_pairing(u, v, "ari");
  if (u.size() < 2) throw std::invalid_argument("ari: needs at least 2 points");
  const auto table = contingency(u, v);
  // Exact integer pair counts; one final division keeps small cases exact.
  std::int64_t index = 0, a = 0, b = 0;
  for (const auto& [cell, count] : table.joint) index += pairs(count);
  for (const auto count : table.row) a += pairs(count);
  for (const auto count : table.col) b += pairs(count);
  const std::int64_t total_pairs = pairs(table.n);
  const std::int64_t numerator = 2 * (index * total_pairs - a * b);
  const std::int64_t denominator = total_pairs * (a + b) - 2 * a * b;
  if (denominator == 0) return 1.0;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("regularized_gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  // Series for P(a,x) when x < a+1; continued fraction for Q(a,x) otherwise.
  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - log_gamma_a);
    return 1.0 - p;
  }
  // Lentz's algorithm for the continued fraction.
  const double tiny = 1e-300;
  double b0 = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b0;
  double h = d;
  for (int k = 1; k < 10000; ++k) {
    const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b0 += 2.0;
    d = an * d + b0;
    if (std::abs(d) < tiny) d = tiny;
    c = b0 + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma_a);
}

namespace {

// Nemenyi q values at alpha = 0.05 for k = 2..10 (studentized range / sqrt 2).
constexpr double kNemenyiQ05[] = {1.959964, 2.343701, 2.569032, 2.727774,
                                  2.849705, 2.948319, 3.030879, 3.101730,
                                  3.163684};

}  // namespace

FriedmanNemenyiResult friedman_nemenyi(
    std::span<const std::vector<double>> results, double alpha) {
  const std::size_t k = results.size();
  if (k < 2)
    throw std::invalid_argument("friedman_nemenyi: need at least 2 algorithms");
  if (k > 10)
    throw std::invalid_argument(
        "friedman_nemenyi: critical values tabulated only up to 10 algorithms");
  if (alpha != 0.05)
    throw std::invalid_argument(
        "friedman_nemenyi: critical values tabulated only for alpha = 0.05");
  const std::size_t n = results.front().size();
  if (n < 2)
    throw std::invalid_argument("friedman_nemenyi: need at least 2 measurements");
  for (const auto& row : results)
    if (row.size() != n)
      throw std::invalid_argument("friedman_nemenyi: ragged result rows");

  FriedmanNemenyiResult out;
  out.mean_ranks.assign(k, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    // Rank algorithms on this measurement: higher value = better = rank 1;
    // tied values share the average of their rank positions.
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return results[a][col] > results[b][col];
    });
    std::size_t i = 0;
    while (i < k) {
      std::size_t j = i;
      while (j + 1 < k && results[order[j + 1]][col] == results[order[i]][col])
        ++j;
      const double shared_rank =
          (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) out.mean_ranks[order[t]] += shared_rank;
      i = j + 1;
    }
  }
  for (double& rank : out.mean_ranks) rank /= static_cast<double>(n);

  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double rank_square_sum = 0.0;
  for (const double rank : out.mean_ranks) rank_square_sum += rank * rank;
  out.statistic = 12.0 * nd / (kd * (kd + 1.0)) *
                  (rank_square_sum - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  if (out.statistic < 0.0) out.statistic = 0.0;  // guard fp cancellation
  out.p_value = regularized_gamma_q((kd - 1.0) / 2.0, out.statistic / 2.0);

  out.critical_distance =
      kNemenyiQ05[k - 2] * std::sqrt(kd * (kd + 1.0) / (6.0 * nd));
  out.significant.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      out.significant[i][j] =
          i != j &&
          std::abs(out.mean_ranks[i] - out.mean_ranks[j]) > out.critical_distance;
  return out;
}

}  // namespace caeac
