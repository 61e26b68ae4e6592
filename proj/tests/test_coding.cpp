#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "mergelab/coding.hpp"

using namespace mergelab;

namespace {

JointDistribution doubly_symmetric_binary(double crossover) {
  Eigen::MatrixXd t(2, 2);
  t << 0.5 * (1 - crossover), 0.5 * crossover, 0.5 * crossover,
      0.5 * (1 - crossover);
  return JointDistribution(t);
}

// Independent oracle: re-derive the maximum-likelihood decode by scanning
// the binning directly and add up the weight of every failing pair.
double oracle_error(const SWCode& code, const JointDistribution& p) {
  double err = 0.0;
  for (long long x = 0; x < code.x_words(); ++x) {
    for (long long y = 0; y < code.y_words(); ++y) {
      long long best = -1;
      double best_w = -1.0;
      for (long long cand = 0; cand < code.x_words(); ++cand) {
        if (code.f[std::size_t(cand)] != code.f[std::size_t(x)]) continue;
        const double w = block_probability(p, code.n, cand, y);
        if (w > best_w) {
          best_w = w;
          best = cand;
        }
      }
      if (best != x) err += block_probability(p, code.n, x, y);
    }
  }
  return err;
}

}  // namespace

TEST_CASE("perfect side information compresses to a single bin") {
  Eigen::MatrixXd t(2, 2);
  t << 0.5, 0.0, 0.0, 0.5;
  const SWCode code = build_code(JointDistribution(t), 1, 0.0, 1, 3);
  CHECK(code.num_bins == 1);
  CHECK(code.error_prob == 0.0);
  CHECK(code.decode(0, 0) == 0);
  CHECK(code.decode(0, 1) == 1);
}

TEST_CASE("independent side information forces full indexing") {
  const JointDistribution p(Eigen::MatrixXd::Constant(2, 2, 0.25));
  const SWCode code = build_code(p, 1, 0.0, 20, 5);
  CHECK(code.num_bins == 2);  // H(X|Y) = 1 bit
  CHECK(code.error_prob == 0.0);
}

TEST_CASE("identity code has zero error and full index set") {
  const JointDistribution p = doubly_symmetric_binary(0.11);
  const SWCode code = identity_code(p, 3);
  CHECK(code.num_bins == 8);
  CHECK(code.error_prob == 0.0);
  for (long long x = 0; x < 8; ++x) {
    CHECK(code.f[std::size_t(x)] == x);
    for (long long y = 0; y < 8; ++y) CHECK(code.in_good_set(x, y));
  }
}

TEST_CASE("correlated binary source error shrinks with block length") {
  const JointDistribution p = doubly_symmetric_binary(0.11);
  std::map<int, double> error;
  for (int n : {6, 8, 10}) {
    const SWCode code = build_code(p, n, 0.25, 50, 1234);
    error[n] = code.error_prob;
    CHECK(code.error_prob < 1.0);
    CHECK(code.error_prob > 0.0);
    CHECK(error_probability(code, p) == code.error_prob);  // same oracle path
  }
  CHECK(error[8] <= error[6]);
  CHECK(error[10] <= error[8]);
}

TEST_CASE("stored error matches the independent oracle") {
  const JointDistribution p = doubly_symmetric_binary(0.2);
  for (int n : {2, 4}) {
    const SWCode code = build_code(p, n, 0.3, 10, 77);
    CHECK(code.error_prob ==
          doctest::Approx(oracle_error(code, p)).epsilon(1e-14));
  }
}

TEST_CASE("good set mass complements the error probability") {
  const JointDistribution p = doubly_symmetric_binary(0.11);
  const SWCode code = build_code(p, 6, 0.25, 20, 9);
  double good_mass = 0.0;
  for (long long x = 0; x < code.x_words(); ++x) {
    for (long long y = 0; y < code.y_words(); ++y) {
      if (code.in_good_set(x, y)) {
        good_mass += block_probability(p, code.n, x, y);
        CHECK(code.decode(code.f[std::size_t(x)], y) == x);
      }
    }
  }
  CHECK(good_mass == doctest::Approx(1.0 - code.error_prob).epsilon(1e-12));
}

TEST_CASE("more bins never hurt the best binning") {
  const JointDistribution p = doubly_symmetric_binary(0.11);
  double previous = 2.0;
  for (double delta : {0.0, 0.1, 0.2, 0.3, 0.45}) {
    const SWCode code = build_code(p, 6, delta, 60, 2024);
    CHECK(code.error_prob <= previous + 1e-12);
    previous = code.error_prob;
  }
}

TEST_CASE("gtilde decodes good pairs and tags the rest") {
  Eigen::MatrixXd t(2, 2);
  t << 0.5, 0.0, 0.0, 0.5;
  const SWCode perfect = build_code(JointDistribution(t), 1, 0.0, 1, 3);
  for (long long y = 0; y < 2; ++y) {
    const GtildeOutput out = gtilde(perfect, 0, y);
    CHECK_FALSE(out.reserve);
    CHECK(out.first == y);
    CHECK(out.y_word == y);
  }

  // with more bins than source words, some bins stay empty and their
  // decodes must fall through to the reserve sector
  const JointDistribution dsbs = doubly_symmetric_binary(0.11);
  const SWCode code = build_code(dsbs, 4, 0.6, 8, 21);
  REQUIRE(code.num_bins > code.x_words());
  bool saw_reserve = false;
  for (long long nu = 0; nu < code.num_bins; ++nu) {
    for (long long y = 0; y < code.y_words(); ++y) {
      const GtildeOutput out = gtilde(code, nu, y);
      if (out.reserve) {
        saw_reserve = true;
        CHECK(out.first == nu);
        CHECK(out.y_word == y);
      } else {
        CHECK(code.in_good_set(out.first, out.y_word));
      }
    }
  }
  CHECK(saw_reserve);
  CHECK_THROWS_AS(gtilde(code, code.num_bins, 0), std::invalid_argument);
}

TEST_CASE("gtilde is injective for every built code") {
  const JointDistribution dsbs = doubly_symmetric_binary(0.11);
  for (int n : {2, 4, 6}) {
    const SWCode code = build_code(dsbs, n, 0.2, 12, n + 100);
    std::set<std::tuple<bool, long long, long long>> outputs;
    for (long long nu = 0; nu < code.num_bins; ++nu) {
      for (long long y = 0; y < code.y_words(); ++y) {
        const GtildeOutput out = gtilde(code, nu, y);
        CHECK(outputs.insert({out.reserve, out.first, out.y_word}).second);
      }
    }
  }
}

TEST_CASE("zero-probability words may be binned but never drive errors") {
  Eigen::MatrixXd t(3, 2);
  t << 0.5, 0.0, 0.0, 0.5, 0.0, 0.0;  // symbol 2 never occurs
  const SWCode code = build_code(JointDistribution(t), 2, 0.0, 30, 40);
  CHECK(code.error_prob == 0.0);
  for (long long y = 0; y < code.y_words(); ++y) {
    // pairs containing the impossible symbol are excluded from the good set
    CHECK_FALSE(code.in_good_set(8, y));  // x^2 = (2,2)
  }
}

TEST_CASE("enumeration budget is enforced with a size estimate") {
  const JointDistribution p = doubly_symmetric_binary(0.11);
  CHECK_THROWS_WITH_AS(build_code(p, 20, 0.1, 1, 1),
                       doctest::Contains("budget"), budget_error);
  CHECK_THROWS_AS(identity_code(p, 30), budget_error);
}

TEST_CASE("rebuilding from a binning reproduces the decoder") {
  const JointDistribution p = doubly_symmetric_binary(0.11);
  const SWCode code = build_code(p, 5, 0.2, 10, 3);
  const SWCode rebuilt = code_from_binning(code.n, code.num_bins, code.f, p);
  CHECK(rebuilt.error_prob == code.error_prob);
  CHECK(rebuilt.g == code.g);
  CHECK(rebuilt.good == code.good);
}
