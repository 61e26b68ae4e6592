#pragma once

#include <cstdint>
#include <vector>

#include "mergelab/info.hpp"

namespace mergelab {

/// Block-n Slepian-Wolf code: compression f over X^n words, maximum-
/// likelihood decompression g over (bin, Y^n word), the set of pairs that
/// decode correctly, and the exactly enumerated error probability under the
/// generating distribution. Words are indexed lexicographically.
struct SWCode {
  int n = 0;
  long long num_bins = 0;  // N
  int x_alphabet = 0;
  int y_alphabet = 0;
  std::vector<std::int32_t> f;    // size |X|^n, values in [0, N)
  std::vector<std::int64_t> g;    // size N * |Y|^n, -1 for empty bins
  std::vector<std::uint8_t> good; // size |X|^n * |Y|^n
  double error_prob = 0.0;

  long long x_words() const;
  long long y_words() const;
  long long decode(long long nu, long long y_word) const {
    return g[nu * y_words() + y_word];
  }
  bool in_good_set(long long x_word, long long y_word) const {
    return good[x_word * y_words() + y_word] != 0;
  }
};

/// Either a decoded source pair or a reserve tag carrying the undecodable
/// (bin, side information) input. The map is injective overall.
struct GtildeOutput {
  bool reserve = false;
  long long first = 0;  // x word if decoded, bin index if reserve
  long long y_word = 0;

  bool operator==(const GtildeOutput&) const = default;
};

/// Builds a code with N = ceil(2^{n (H(X|Y) + rate_delta)}) bins by seeded
/// i.i.d. uniform random binning, keeping the binning with the smallest
/// exact error probability over `trials` attempts. The decoder is maximum
/// likelihood with lexicographically smallest tie-breaking; empty bins
/// decode to nothing and fall through to the reserve sector.
SWCode build_code(const JointDistribution& p, int n, double rate_delta,
                  int trials, std::uint64_t seed,
                  long long enumeration_budget = 1LL << 22);

/// The full-index code with N = |X|^n and the identity binning; zero error.
SWCode identity_code(const JointDistribution& p, int n,
                     long long enumeration_budget = 1LL << 22);

/// Rebuilds the maximum-likelihood decoder, good set, and exact error for an
/// externally supplied binning.
SWCode code_from_binning(int n, long long num_bins, std::vector<std::int32_t> f,
                         const JointDistribution& p,
                         long long enumeration_budget = 1LL << 22);

/// Exact Pr{X^n != g(f(X^n), Y^n)} recomputed from the tables.
double error_probability(const SWCode& code, const JointDistribution& p);

GtildeOutput gtilde(const SWCode& code, long long nu, long long y_word);

/// Product-distribution weight of a word pair, prod_i p(x_i, y_i).
double block_probability(const JointDistribution& p, int n, long long x_word,
                         long long y_word);

}  // namespace mergelab
