#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mergelab/coding.hpp"
#include "mergelab/qstate.hpp"
#include "mergelab/statezoo.hpp"

namespace mergelab {

/// Strict consume/produce accounting for one protocol run over an n-copy
/// block. Catalytic borrowing is not modeled.
struct ResourceLedger {
  double ebits_consumed = 0.0;
  double ebits_gained = 0.0;
  double cobits_consumed = 0.0;
  double cobits_gained = 0.0;
  int n = 1;

  double entanglement_rate() const {
    return (ebits_consumed - ebits_gained) / double(n);
  }
  double coherence_rate() const {
    return (cobits_consumed - cobits_gained) / double(n);
  }
};

struct TranscriptStep {
  std::string step;
  std::string party;
  std::string message;
};

struct MergeOutcome {
  /// Outcome-averaged final state; absent when the dense dimension exceeds
  /// the materialization bound.
  std::optional<DensityOperator> final_state;
  double target_distance = 0.0;
  double sw_error = 0.0;
  ResourceLedger ledger;
  std::vector<TranscriptStep> transcript;
  /// Asymptotic coherence rate of the branch-rotation step, reported only by
  /// the flower protocol (1 + log2(d)/2).
  double analytic_coherence_rate = std::numeric_limits<double>::quiet_NaN();
};

struct MergeOptions {
  /// Maximum number of (x^n, y^n) branches tracked by the simulator.
  long long branch_budget = 1LL << 21;
  /// Maximum number of conjugate-basis measurement outcomes d^n.
  long long gram_cap = 1LL << 10;
  /// Densify the final state only up to this total dimension.
  long long materialize_dim = 512;
};

/// Runs the coherent Slepian-Wolf merging protocol on psi^{x n} with the
/// given code: Alice appends the bin index, the index register moves to Bob
/// at a cost of ceil(log2 N) ebits, Bob applies the injective decode
/// isometry, and Alice's conjugate-basis measurement plus Bob's diagonal
/// corrections decouple her register. The global state is propagated
/// exactly in a branch-compressed form (no sampling); target_distance is
/// the trace distance of the outcome-averaged final state to psi^{x n}.
MergeOutcome merge_pure(const PureState& psi, int n, const SWCode& code,
                        const MergeOptions& options = {});

/// Exact single-copy merging of the flower state without entanglement:
/// Alice measures the branch flag, Bob undoes the branch unitary, prepares
/// |+>, and reapplies the branch rotation as a controlled unitary. Every
/// Bob operation except the controlled unitary is incoherent; the ledger
/// charges the coherence that operation can generate plus the cobit spent
/// on |+>.
MergeOutcome merge_flower(long long d);

/// Exact merging of the classically flagged separable family: Bob and Alice
/// exchange measurement outcomes and Bob re-prepares the flagged state. The
/// ledger charges the expected preparation coherence, using no
/// entanglement.
MergeOutcome merge_separable(const SeparableFamily& family);

/// Compression of a single system through the merging protocol: the input
/// is purified, a trivial side-information register is attached, and
/// merge_pure runs with the given code built from the diagonal of rho.
MergeOutcome incoherent_schumacher(const DensityOperator& rho, int n,
                                   const SWCode& code,
                                   const MergeOptions& options = {});

/// Applies `steps` random LQICC rounds (unitaries and measurements on the
/// quantum side, incoherent channels on the other, classically controlled
/// corrections) and records the QI relative entropy after each round. The
/// returned sequence starts with the input value and never increases.
std::vector<double> lqicc_monotonicity_probe(
    const DensityOperator& rho, const std::vector<std::string>& incoherent_side,
    int steps, std::uint64_t seed);

}  // namespace mergelab
