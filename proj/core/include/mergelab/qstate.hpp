#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mergelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Construction tolerances for state invariants (hermiticity, normalization,
/// positivity). Eigenvalues in [-kStateTol, 0) are clamped to zero so that
/// accumulated floating error over n-copy tensor powers does not reject
/// physically valid states.
inline constexpr double kStateTol = 1e-9;

/// Thrown when an operation would exceed the configured dimension budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Factor {
  std::string label;
  long long dim = 0;
};

/// Ordered list of labeled tensor factors. The first factor is the most
/// significant in the flattened index (Kronecker convention), and all
/// cross-module operations address factors by label, never by position.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<Factor> factors);

  long long total_dim() const { return total_dim_; }
  std::size_t factor_count() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }

  bool has_label(const std::string& label) const;
  /// Index of the factor with the given label; throws naming the label.
  std::size_t index_of(const std::string& label) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const;

  /// Stride of factor i in the flattened index (product of later dims).
  long long stride(std::size_t i) const { return strides_[i]; }

  /// Concatenation; rejects duplicate labels naming the offender.
  SystemLayout concat(const SystemLayout& other) const;
  /// Layout without the listed factors.
  SystemLayout drop(const std::vector<std::string>& labels) const;
  /// Metadata-only rename, modeling ideal register transfer.
  SystemLayout relabeled(const std::string& from, const std::string& to) const;

  bool operator==(const SystemLayout& other) const;

 private:
  std::vector<Factor> factors_;
  std::vector<long long> strides_;
  long long total_dim_ = 1;
};

/// Normalized state vector over a labeled layout.
class PureState {
 public:
  PureState(SystemLayout layout, Vector amplitudes);

  const SystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amp_; }

  PureState relabeled(const std::string& from, const std::string& to) const;

 private:
  SystemLayout layout_;
  Vector amp_;
};

/// Density operator over a labeled layout. Construction enforces
/// hermiticity, unit trace, and positivity within kStateTol; eigenvalues in
/// [-kStateTol, 0) are clamped to zero.
class DensityOperator {
 public:
  DensityOperator(SystemLayout layout, Matrix matrix);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return mat_; }

  DensityOperator relabeled(const std::string& from, const std::string& to) const;

 private:
  SystemLayout layout_;
  Matrix mat_;
};

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

DensityOperator to_density(const PureState& psi);

/// Trace out the listed subsystems. Trace is preserved.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& drop);
DensityOperator partial_trace(const PureState& psi,
                              const std::vector<std::string>& drop);

/// Full decoherence of the listed subsystems in the computational basis:
/// every entry coupling different basis indices of those factors is zeroed.
DensityOperator dephase(const DensityOperator& rho,
                        const std::vector<std::string>& subsystems);

/// Unnormalized trace norm of the difference, in [0, 2].
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const PureState& a, const PureState& b);

/// <psi| rho |psi>, in [0, 1].
double overlap(const PureState& psi, const DensityOperator& rho);

/// Apply a unitary on the product of the target factors, identity elsewhere.
/// The unitary's index ordering follows the order of `targets` as given.
PureState apply_unitary(const PureState& state, const Matrix& u,
                        const std::vector<std::string>& targets);
DensityOperator apply_unitary(const DensityOperator& state, const Matrix& u,
                              const std::vector<std::string>& targets);

/// Permute the tensor factors into the given label order.
PureState reorder(const PureState& state, const std::vector<std::string>& order);
DensityOperator reorder(const DensityOperator& state,
                        const std::vector<std::string>& order);

/// Basis vector |indices> over the layout (one index per factor).
PureState basis_state(const SystemLayout& layout,
                      const std::vector<long long>& indices);

DensityOperator maximally_mixed(const SystemLayout& layout);

/// Lift `u` acting on `targets` (in the given order) to the full layout
/// dimension. Used by apply_unitary and exposed for protocol assembly.
Matrix lift_operator(const SystemLayout& layout, const Matrix& u,
                     const std::vector<std::string>& targets);

bool is_unitary(const Matrix& u, double tol = kStateTol);

}  // namespace mergelab
