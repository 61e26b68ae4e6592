#include "mergelab/info.hpp"

#include <cmath>

namespace mergelab {

namespace {

double entropy_bits(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (long long i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues[i];
    if (lam > kEntropyEigenFloor) s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace

JointDistribution::JointDistribution(Eigen::MatrixXd p) : p_(std::move(p)) {
  if (p_.rows() == 0 || p_.cols() == 0) {
    throw std::invalid_argument("empty distribution table");
  }
  if (p_.minCoeff() < 0.0) {
    throw std::invalid_argument("distribution has negative entries");
  }
  if (std::abs(p_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("distribution entries sum to " +
                                std::to_string(p_.sum()) + ", expected 1");
  }
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStateTol) {
    throw std::invalid_argument("entropy of a non-positive operator");
  }
  return entropy_bits(es.eigenvalues());
}

double shannon_entropy(const Eigen::VectorXd& p) {
  if (p.size() == 0 || p.minCoeff() < 0.0) {
    throw std::invalid_argument("invalid probability vector");
  }
  if (std::abs(p.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("probability vector sums to " +
                                std::to_string(p.sum()));
  }
  return entropy_bits(p);
}

double conditional_shannon(const JointDistribution& p) {
  Eigen::VectorXd joint(Eigen::Map<const Eigen::VectorXd>(
      p.table().data(), p.table().size()));
  return entropy_bits(joint) - entropy_bits(p.marginal_y());
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) {
    throw std::invalid_argument("binary_entropy argument outside [0, 1]");
  }
  double s = 0.0;
  if (x > kEntropyEigenFloor) s -= x * std::log2(x);
  if (1.0 - x > kEntropyEigenFloor) s -= (1.0 - x) * std::log2(1.0 - x);
  return s;
}

double rel_entropy_coherence(const DensityOperator& rho) {
  std::vector<std::string> all;
  for (const auto& f : rho.layout().factors()) all.push_back(f.label);
  return von_neumann_entropy(dephase(rho, all)) - von_neumann_entropy(rho);
}

double qi_relative_entropy(const DensityOperator& rho,
                           const std::vector<std::string>& incoherent_side) {
  return von_neumann_entropy(dephase(rho, incoherent_side)) -
         von_neumann_entropy(rho);
}

JointDistribution amplitude_distribution(const PureState& psi,
                                         const std::string& x_label,
                                         const std::string& y_label) {
  const auto& layout = psi.layout();
  const std::size_t xi = layout.index_of(x_label);
  const std::size_t yi = layout.index_of(y_label);
  Eigen::MatrixXd p =
      Eigen::MatrixXd::Zero(layout.factor(xi).dim, layout.factor(yi).dim);
  for (long long flat = 0; flat < layout.total_dim(); ++flat) {
    const long long x = (flat / layout.stride(xi)) % layout.factor(xi).dim;
    const long long y = (flat / layout.stride(yi)) % layout.factor(yi).dim;
    p(x, y) += std::norm(psi.amplitudes()[flat]);
  }
  return JointDistribution(p / p.sum());
}

}  // namespace mergelab
