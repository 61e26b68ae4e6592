#include "mergelab/coding.hpp"

#include <cmath>
#include <random>
#include <string>

namespace mergelab {

namespace {

long long ipow(long long base, int exp) {
  long long out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

void check_enumeration_budget(const JointDistribution& p, int n,
                              long long budget) {
  double pairs = 1.0;
  for (int i = 0; i < n; ++i) pairs *= double(p.x_size()) * double(p.y_size());
  if (pairs > double(budget)) {
    throw budget_error("exact enumeration needs " + std::to_string(pairs) +
                       " word pairs, over the budget of " +
                       std::to_string(budget));
  }
}

// Exact error probability of the decode table: total weight of pairs whose
// decode differs from the source word. Shared by build and audit paths so
// the two agree bitwise.
double exact_error(const SWCode& code, const JointDistribution& p) {
  const long long xw = code.x_words(), yw = code.y_words();
  double err = 0.0;
  for (long long x = 0; x < xw; ++x) {
    const long long nu = code.f[x];
    for (long long y = 0; y < yw; ++y) {
      if (code.g[nu * yw + y] != x) {
        err += block_probability(p, code.n, x, y);
      }
    }
  }
  return err;
}

void fill_decode_and_good(SWCode& code, const JointDistribution& p) {
  const long long xw = code.x_words(), yw = code.y_words();
  code.g.assign(std::size_t(code.num_bins * yw), -1);
  std::vector<double> best(std::size_t(code.num_bins), -1.0);
  for (long long y = 0; y < yw; ++y) {
    std::fill(best.begin(), best.end(), -1.0);
    for (long long x = 0; x < xw; ++x) {
      const long long nu = code.f[x];
      const double w = block_probability(p, code.n, x, y);
      // strict comparison in increasing x order gives the lexicographically
      // smallest argmax
      if (w > best[nu]) {
        best[nu] = w;
        code.g[nu * yw + y] = x;
      }
    }
  }
  code.good.assign(std::size_t(xw * yw), 0);
  for (long long x = 0; x < xw; ++x) {
    const long long nu = code.f[x];
    for (long long y = 0; y < yw; ++y) {
      if (code.g[nu * yw + y] == x &&
          block_probability(p, code.n, x, y) > 0.0) {
        code.good[x * yw + y] = 1;
      }
    }
  }
  code.error_prob = exact_error(code, p);
}

}  // namespace

long long SWCode::x_words() const { return ipow(x_alphabet, n); }
long long SWCode::y_words() const { return ipow(y_alphabet, n); }

double block_probability(const JointDistribution& p, int n, long long x_word,
                         long long y_word) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) {
    out *= p(int(x_word % p.x_size()), int(y_word % p.y_size()));
    x_word /= p.x_size();
    y_word /= p.y_size();
  }
  return out;
}

SWCode build_code(const JointDistribution& p, int n, double rate_delta,
                  int trials, std::uint64_t seed, long long enumeration_budget) {
  if (n < 1) throw std::invalid_argument("block length must be >= 1");
  if (rate_delta < 0.0) throw std::invalid_argument("rate_delta must be >= 0");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  check_enumeration_budget(p, n, enumeration_budget);

  const double rate_exp = double(n) * (conditional_shannon(p) + rate_delta);
  // small backoff so an analytically integer 2^{n(H+delta)} is not pushed to
  // the next integer by entropy round-off
  const long long num_bins = llround(std::ceil(std::exp2(rate_exp) - 1e-9));

  SWCode code;
  code.n = n;
  code.num_bins = num_bins;
  code.x_alphabet = p.x_size();
  code.y_alphabet = p.y_size();
  const long long xw = code.x_words(), yw = code.y_words();

  // weight table, reused across trials
  std::vector<double> weight(std::size_t(xw * yw), 0.0);
  for (long long x = 0; x < xw; ++x) {
    for (long long y = 0; y < yw; ++y) {
      weight[std::size_t(x * yw + y)] = block_probability(p, n, x, y);
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> bin(0, num_bins - 1);
  std::vector<std::int32_t> f(std::size_t(xw), 0);
  std::vector<std::int32_t> best_f;
  std::vector<double> best(std::size_t(num_bins), 0.0);
  std::vector<long long> arg(std::size_t(num_bins), 0);
  double best_err = 2.0;
  for (int t = 0; t < trials; ++t) {
    for (auto& v : f) v = std::int32_t(bin(rng));
    double err = 0.0;
    for (long long y = 0; y < yw; ++y) {
      std::fill(best.begin(), best.end(), -1.0);
      std::fill(arg.begin(), arg.end(), -1);
      for (long long x = 0; x < xw; ++x) {
        const double w = weight[std::size_t(x * yw + y)];
        if (w > best[f[x]]) {
          best[f[x]] = w;
          arg[f[x]] = x;
        }
      }
      for (long long x = 0; x < xw; ++x) {
        if (arg[f[x]] != x) err += weight[std::size_t(x * yw + y)];
      }
    }
    if (err < best_err) {
      best_err = err;
      best_f = f;
      if (err == 0.0) break;
    }
  }
  code.f = std::move(best_f);
  fill_decode_and_good(code, p);
  return code;
}

SWCode identity_code(const JointDistribution& p, int n,
                     long long enumeration_budget) {
  if (n < 1) throw std::invalid_argument("block length must be >= 1");
  check_enumeration_budget(p, n, enumeration_budget);
  SWCode code;
  code.n = n;
  code.x_alphabet = p.x_size();
  code.y_alphabet = p.y_size();
  code.num_bins = code.x_words();
  code.f.resize(std::size_t(code.x_words()));
  for (long long x = 0; x < code.x_words(); ++x) code.f[x] = std::int32_t(x);
  fill_decode_and_good(code, p);
  return code;
}

SWCode code_from_binning(int n, long long num_bins, std::vector<std::int32_t> f,
                         const JointDistribution& p,
                         long long enumeration_budget) {
  if (n < 1) throw std::invalid_argument("block length must be >= 1");
  if (num_bins < 1) throw std::invalid_argument("bin count must be >= 1");
  check_enumeration_budget(p, n, enumeration_budget);
  SWCode code;
  code.n = n;
  code.num_bins = num_bins;
  code.x_alphabet = p.x_size();
  code.y_alphabet = p.y_size();
  if (std::ssize(f) != code.x_words()) {
    throw std::invalid_argument("binning table has the wrong length");
  }
  for (auto v : f) {
    if (v < 0 || v >= num_bins) {
      throw std::invalid_argument("bin index out of range");
    }
  }
  code.f = std::move(f);
  fill_decode_and_good(code, p);
  return code;
}

double error_probability(const SWCode& code, const JointDistribution& p) {
  if (p.x_size() != code.x_alphabet || p.y_size() != code.y_alphabet) {
    throw std::invalid_argument("distribution alphabets do not match the code");
  }
  return exact_error(code, p);
}

GtildeOutput gtilde(const SWCode& code, long long nu, long long y_word) {
  if (nu < 0 || nu >= code.num_bins || y_word < 0 || y_word >= code.y_words()) {
    throw std::invalid_argument("gtilde input out of range");
  }
  const long long decoded = code.decode(nu, y_word);
  if (decoded >= 0 && code.in_good_set(decoded, y_word)) {
    return {false, decoded, y_word};
  }
  return {true, nu, y_word};
}

}  // namespace mergelab
