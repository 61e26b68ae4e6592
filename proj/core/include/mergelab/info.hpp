#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mergelab/qstate.hpp"

namespace mergelab {

/// Eigenvalues below this floor contribute zero to entropies; eigen-solver
/// noise otherwise produces NaN from lambda*log(lambda).
inline constexpr double kEntropyEigenFloor = 1e-12;

/// Joint probability table p(x, y), rows indexed by x, columns by y.
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd p);

  int x_size() const { return int(p_.rows()); }
  int y_size() const { return int(p_.cols()); }
  const Eigen::MatrixXd& table() const { return p_; }
  double operator()(int x, int y) const { return p_(x, y); }

  Eigen::VectorXd marginal_x() const { return p_.rowwise().sum(); }
  Eigen::VectorXd marginal_y() const { return p_.colwise().sum().transpose(); }

 private:
  Eigen::MatrixXd p_;
};

/// S(rho) = -Tr[rho log2 rho], in bits.
double von_neumann_entropy(const DensityOperator& rho);

/// Shannon entropy of a probability vector, in bits.
double shannon_entropy(const Eigen::VectorXd& p);

/// H(X|Y) = H(XY) - H(Y), in bits.
double conditional_shannon(const JointDistribution& p);

/// h(x) = -x log2 x - (1-x) log2(1-x).
double binary_entropy(double x);

/// Relative entropy of coherence C_r(rho) = S(dephased rho) - S(rho), with
/// the dephasing over every factor of the layout.
double rel_entropy_coherence(const DensityOperator& rho);

/// Quantum-incoherent relative entropy S(dephase_Y rho) - S(rho), where only
/// the listed factors are dephased. Zero exactly on quantum-incoherent
/// states, and an LQICC monotone.
double qi_relative_entropy(const DensityOperator& rho,
                           const std::vector<std::string>& incoherent_side);

/// Probability table |<x, y, rest | psi>|^2 summed over all factors other
/// than x_label and y_label.
JointDistribution amplitude_distribution(const PureState& psi,
                                         const std::string& x_label,
                                         const std::string& y_label);

}  // namespace mergelab
