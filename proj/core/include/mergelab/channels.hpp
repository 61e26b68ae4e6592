#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mergelab/qstate.hpp"

namespace mergelab {

/// Completely positive trace-preserving map given by Kraus operators, with
/// labeled input and output layouts. Completeness sum K^dag K = I is
/// enforced at construction within kStateTol.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> kraus, SystemLayout input_layout,
               SystemLayout output_layout);

  /// Channel between unlabeled single-factor spaces of the given dimensions.
  static KrausChannel from_dims(std::vector<Matrix> kraus, long long in_dim,
                                long long out_dim);

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const SystemLayout& input_layout() const { return in_; }
  const SystemLayout& output_layout() const { return out_; }
  long long in_dim() const { return in_.total_dim(); }
  long long out_dim() const { return out_.total_dim(); }

 private:
  std::vector<Matrix> kraus_;
  SystemLayout in_, out_;
};

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho);

/// True iff every column of every Kraus operator has at most one entry with
/// magnitude above 1e-12, i.e. each operator maps basis vectors to scaled
/// basis vectors.
bool is_incoherent(const KrausChannel& ch);

/// True iff every Kraus operator and its adjoint are both incoherent (at
/// most one nonzero per row and per column).
bool is_strictly_incoherent(const KrausChannel& ch);

/// True iff the channel maps every incoherent state to an incoherent state.
/// Checking basis projectors suffices since incoherent states are their
/// convex hull and the channel is linear.
bool is_mio(const KrausChannel& ch);

KrausChannel identity_channel(long long d);
KrausChannel full_dephasing_channel(long long d);
KrausChannel unitary_channel(const Matrix& u);

/// Measure-in-two-mutually-unbiased-bases map: the input is rotated by the
/// identity or the QFT with an even coin, dephased, and the coin recorded,
/// M(sigma) = 1/2 |0><0| x deph(sigma) + 1/2 |1><1| x deph(QFT sigma QFT^dag).
/// Output layout is ("B~", 2) x ("B", d).
KrausChannel flower_decode_channel(long long d);

/// Kraus-product channel acting on the tensor pair of inputs. Layout labels
/// are replaced by unlabeled single factors.
KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b);

/// Smallest output entropy S(ch(|phi><phi|)) found by seeded multi-start
/// projected gradient descent over pure inputs, in bits. An upper bound on
/// the true minimum; deterministic given the seed.
double min_output_entropy(const KrausChannel& ch, int restarts,
                          std::uint64_t seed);

Matrix random_unitary(long long d, std::mt19937_64& rng);

/// Random strictly incoherent channel: Kraus operators supported on random
/// permutations with column-wise random amplitude splits.
KrausChannel random_sio_channel(long long d, int kraus_count,
                                std::mt19937_64& rng);

/// Random incoherent channel: a collapse onto a random orthonormal basis
/// with basis-state targets; incoherent but generally not strictly so.
KrausChannel random_io_channel(long long d, std::mt19937_64& rng);

/// Generic random channel from a Haar-random Stinespring isometry.
KrausChannel random_channel(long long d, int kraus_count,
                            std::mt19937_64& rng);

}  // namespace mergelab
