#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mergelab/qstate.hpp"

namespace mergelab {

/// Classically flagged ensemble {p_ij, |psi_ij>} on A, with the states for
/// each i mutually orthogonal across j.
class SeparableFamily {
 public:
  SeparableFamily(Eigen::MatrixXd p, std::vector<std::vector<Vector>> states);

  int rows() const { return int(p_.rows()); }    // i values
  int cols() const { return int(p_.cols()); }    // j values
  long long a_dim() const { return states_[0][0].size(); }
  double weight(int i, int j) const { return p_(i, j); }
  const Eigen::MatrixXd& weights() const { return p_; }
  const Vector& state(int i, int j) const { return states_[i][j]; }

 private:
  Eigen::MatrixXd p_;
  std::vector<std::vector<Vector>> states_;
};

/// |Phi_d> = sum_i |ii> / sqrt(d) on two d-dimensional factors.
PureState max_entangled(long long d, const std::string& label_a = "A",
                        const std::string& label_b = "B");

/// |Psi_d> = sum_i |i> / sqrt(d) on one d-dimensional factor.
PureState max_coherent(long long d, const std::string& label = "A");

/// Quantum Fourier transform matrix, entries omega^{jk} / sqrt(d).
Matrix qft(long long d);

/// The two-branch state on (R: d, A: 2, B: d) built from identity and QFT
/// branches over the maximally entangled state. An alternative second branch
/// unitary may be supplied.
PureState flower(long long d, const std::optional<Matrix>& u1 = std::nullopt);

/// rho = sum_ij p_ij |ij><ij|_R x |psi_ij><psi_ij|_A x |i><i|_B,
/// with R indexing the (i, j) pairs lexicographically.
DensityOperator separable_family_state(const SeparableFamily& family);

/// Haar-distributed pure state (normalized complex Gaussian), seeded.
PureState random_pure(const SystemLayout& layout, std::uint64_t seed);

/// Mixed state obtained by tracing a rank-dimensional ancilla out of a Haar
/// random pure state.
DensityOperator random_density(const SystemLayout& layout, long long rank,
                               std::uint64_t seed);

}  // namespace mergelab
