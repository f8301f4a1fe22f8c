#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "caeac/metrics.hpp"
#include "support.hpp"

using namespace caeac;
using namespace testsupport;

using Labels = std::vector<std::string>;

TEST_CASE("accuracy") {
  CHECK(accuracy(Labels{"a", "b"}, Labels{"a", "b"}) == 1.0);
  CHECK(accuracy(Labels{"a", "b"}, Labels{"x", "y"}) == 0.0);
  CHECK(accuracy(Labels{"a", "a", "b", "b"}, Labels{"a", "b", "b", "b"}) == 0.75);
  CHECK_THROWS_AS(accuracy(Labels{}, Labels{}), std::invalid_argument);
  CHECK_THROWS_AS(accuracy(Labels{"a"}, Labels{"a", "b"}), std::invalid_argument);
}

TEST_CASE("nmi hand values and degenerate partitions") {
  CHECK(nmi(Labels{"a", "b", "c"}, Labels{"x", "y", "z"}) == 1.0);
  CHECK(nmi(Labels{"a", "a", "b", "b"}, Labels{"a", "a", "b", "b"}) == 1.0);
  // Product design: joint counts uniform, so mutual information vanishes.
  CHECK(nmi(Labels{"a", "a", "b", "b"}, Labels{"x", "y", "x", "y"}) == 0.0);
  // 2x2 contingency {{2,0},{1,1}}.
  CHECK(nmi(Labels{"a", "a", "b", "b"}, Labels{"x", "x", "x", "y"}) ==
        doctest::Approx(0.34559202994421129).epsilon(1e-12));
  // Single-cluster degeneracies.
  CHECK(nmi(Labels{"a", "a"}, Labels{"x", "x"}) == 1.0);
  CHECK(nmi(Labels{"a", "a"}, Labels{"x", "y"}) == 0.0);
  CHECK(nmi(Labels{"a", "b"}, Labels{"x", "x"}) == 0.0);
  CHECK_THROWS_AS(nmi(Labels{}, Labels{}), std::invalid_argument);
}

TEST_CASE("nmi properties over random partitions") {
  std::mt19937_64 eng(404);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + eng() % 29;
    const Labels u = random_partition(eng, n, 1 + eng() % 4);
    const Labels v = random_partition(eng, n, 1 + eng() % 4);
    const double value = nmi(u, v);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
    // Swapping the arguments permutes the summation order, so symmetry holds
    // only up to the last bit of rounding.
    CHECK(value == doctest::Approx(nmi(v, u)).epsilon(1e-12));
    CHECK(value == doctest::Approx(oracle_nmi_direct(u, v)).epsilon(1e-10));

    // Consistent relabeling cannot change the score.
    Labels renamed = u;
    for (auto& label : renamed) label = "renamed-" + label;
    CHECK(nmi(renamed, v) == value);
  }
}

TEST_CASE("ari hand values") {
  CHECK(ari(Labels{"a", "a", "b", "b"}, Labels{"x", "x", "y", "y"}) == 1.0);
  // The adjustment can go negative: worse than chance agreement.
  CHECK(ari(Labels{"a", "a", "b", "b"}, Labels{"x", "y", "x", "y"}) == -0.5);
  CHECK(ari(Labels{"a", "a", "b", "b"}, Labels{"a", "a", "a", "b"}) ==
        doctest::Approx(oracle_ari_pairs(Labels{"a", "a", "b", "b"},
                                         Labels{"a", "a", "a", "b"}))
            .epsilon(1e-12));
  // Zero adjustment denominator: identical trivial partitions.
  CHECK(ari(Labels{"a", "b", "c"}, Labels{"x", "y", "z"}) == 1.0);
  CHECK(ari(Labels{"a", "a", "a"}, Labels{"x", "x", "x"}) == 1.0);
  CHECK_THROWS_AS(ari(Labels{"a"}, Labels{"x"}), std::invalid_argument);
  CHECK_THROWS_AS(ari(Labels{"a", "b"}, Labels{"x"}), std::invalid_argument);
}

TEST_CASE("ari matches the pair-count oracle on random partitions") {
  std::mt19937_64 eng(505);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + eng() % 29;
    const Labels u = random_partition(eng, n, 1 + eng() % 5);
    const Labels v = random_partition(eng, n, 1 + eng() % 5);
    const double value = ari(u, v);
    CHECK(value == doctest::Approx(oracle_ari_pairs(u, v)).epsilon(1e-10));
    CHECK(value <= 1.0);
    CHECK(value == ari(v, u));

    Labels renamed = v;
    for (auto& label : renamed) label = label + "-renamed";
    CHECK(ari(u, renamed) == value);
  }
}

TEST_CASE("regularized upper gamma agrees with closed forms") {
  const double pi = std::numbers::pi;
  for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 3.5, 5.0, 8.0, 12.0, 20.0}) {
    CHECK(regularized_gamma_q(0.5, x) ==
          doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
    CHECK(regularized_gamma_q(1.0, x) ==
          doctest::Approx(std::exp(-x)).epsilon(1e-12));
    CHECK(regularized_gamma_q(1.5, x) ==
          doctest::Approx(std::erfc(std::sqrt(x)) +
                          2.0 * std::sqrt(x / pi) * std::exp(-x))
              .epsilon(1e-12));
    CHECK(regularized_gamma_q(2.0, x) ==
          doctest::Approx(std::exp(-x) * (1.0 + x)).epsilon(1e-12));
    CHECK(regularized_gamma_q(3.0, x) ==
          doctest::Approx(std::exp(-x) * (1.0 + x + x * x / 2.0))
              .epsilon(1e-12));
  }
  CHECK(regularized_gamma_q(2.0, 0.0) == 1.0);
  CHECK_THROWS_AS(regularized_gamma_q(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_gamma_q(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("friedman validation") {
  const std::vector<std::vector<double>> one_row{{1.0, 2.0}};
  CHECK_THROWS_AS(friedman_nemenyi(one_row, 0.05), std::invalid_argument);
  const std::vector<std::vector<double>> one_col{{1.0}, {2.0}};
  CHECK_THROWS_AS(friedman_nemenyi(one_col, 0.05), std::invalid_argument);
  const std::vector<std::vector<double>> ragged{{1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS(friedman_nemenyi(ragged, 0.05), std::invalid_argument);
  const std::vector<std::vector<double>> fine{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_AS(friedman_nemenyi(fine, 0.01), std::invalid_argument);
  const std::vector<std::vector<double>> eleven(11, std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(friedman_nemenyi(eleven, 0.05), std::invalid_argument);
  CHECK_NOTHROW(friedman_nemenyi(fine, 0.05));
}

TEST_CASE("identical algorithms yield zero statistic and no significance") {
  const std::vector<std::vector<double>> results(4, std::vector<double>(6, 0.7));
  const auto out = friedman_nemenyi(results, 0.05);
  CHECK(out.statistic == 0.0);
  CHECK(out.p_value == 1.0);
  for (const double rank : out.mean_ranks) CHECK(rank == 2.5);  // all tied
  for (const auto& row : out.significant)
    for (const bool flag : row) CHECK_FALSE(flag);
}

TEST_CASE("a strictly dominant algorithm holds mean rank 1") {
  std::vector<std::vector<double>> results(3, std::vector<double>(20));
  std::mt19937_64 eng(9);
  for (std::size_t col = 0; col < 20; ++col) {
    results[0][col] = 0.9 + 0.001 * static_cast<double>(col);
    results[1][col] = uniform_double(eng) * 0.5;
    results[2][col] = uniform_double(eng) * 0.5;
  }
  const auto out = friedman_nemenyi(results, 0.05);
  CHECK(out.mean_ranks[0] == 1.0);
}

TEST_CASE("three-by-four hand table") {
  const std::vector<std::vector<double>> results{
      {0.9, 0.8, 0.7, 0.6},   // rank 1 on every measurement
      {0.5, 0.5, 0.5, 0.5},   // rank 2
      {0.1, 0.2, 0.3, 0.4}};  // rank 3
  const auto out = friedman_nemenyi(results, 0.05);
  CHECK(out.mean_ranks == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(out.statistic == 8.0);
  CHECK(out.p_value == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
  // Nemenyi at k=3, N=4: q = 2.343701.
  const double cd = 2.343701 * std::sqrt(3.0 * 4.0 / (6.0 * 4.0));
  CHECK(out.critical_distance == doctest::Approx(cd).epsilon(1e-12));
  CHECK(out.significant[0][2]);
  CHECK(out.significant[2][0]);
  CHECK_FALSE(out.significant[0][1]);
  CHECK_FALSE(out.significant[1][2]);
  CHECK_FALSE(out.significant[0][0]);

  CHECK(out.statistic ==
        doctest::Approx(oracle_friedman_statistic(results)).epsilon(1e-12));
}

TEST_CASE("friedman agrees with the counting oracle, ties included") {
  std::mt19937_64 eng(606);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + eng() % 9;   // 2..10
    const std::size_t n = 2 + eng() % 12;  // 2..13
    std::vector<std::vector<double>> results(k, std::vector<double>(n));
    for (auto& row : results)
      for (double& v : row)
        // One-decimal grid forces frequent ties.
        v = std::round(uniform_double(eng) * 10.0) / 10.0;
    const auto out = friedman_nemenyi(results, 0.05);
    const auto oracle_ranks = oracle_friedman_mean_ranks(results);
    for (std::size_t i = 0; i < k; ++i)
      CHECK(out.mean_ranks[i] == doctest::Approx(oracle_ranks[i]).epsilon(1e-12));
    CHECK(out.statistic ==
          doctest::Approx(oracle_friedman_statistic(results)).scale(1.0).epsilon(1e-10));
    CHECK(out.p_value >= 0.0);
    CHECK(out.p_value <= 1.0);
    // p-value closed forms for small k.
    if (k == 2)
      CHECK(out.p_value ==
            doctest::Approx(std::erfc(std::sqrt(out.statistic / 2.0)))
                .epsilon(1e-10));
    if (k == 3)
      CHECK(out.p_value ==
            doctest::Approx(std::exp(-out.statistic / 2.0)).epsilon(1e-10));
    for (std::size_t i = 0; i < k; ++i) {
      CHECK_FALSE(out.significant[i][i]);
      for (std::size_t j = 0; j < k; ++j)
        CHECK(out.significant[i][j] == out.significant[j][i]);
    }
  }
}
