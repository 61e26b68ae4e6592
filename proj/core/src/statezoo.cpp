#include "mergelab/statezoo.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mergelab {

SeparableFamily::SeparableFamily(Eigen::MatrixXd p,
                                 std::vector<std::vector<Vector>> states)
    : p_(std::move(p)), states_(std::move(states)) {
  if (p_.rows() == 0 || p_.cols() == 0) {
    throw std::invalid_argument("empty family");
  }
  if (p_.minCoeff() < 0.0 || std::abs(p_.sum() - 1.0) > kStateTol) {
    throw std::invalid_argument("family weights are not a distribution");
  }
  if (std::ssize(states_) != p_.rows()) {
    throw std::invalid_argument("state table rows do not match weights");
  }
  const long long da = states_[0].empty() ? 0 : states_[0][0].size();
  for (int i = 0; i < p_.rows(); ++i) {
    if (std::ssize(states_[i]) != p_.cols()) {
      throw std::invalid_argument("state table columns do not match weights");
    }
    for (int j = 0; j < p_.cols(); ++j) {
      if (states_[i][j].size() != da) {
        throw std::invalid_argument("family states have mismatched dimensions");
      }
      for (int k = 0; k <= j; ++k) {
        const Complex ov = states_[i][j].dot(states_[i][k]);
        const double want = (j == k) ? 1.0 : 0.0;
        if (std::abs(ov - want) > kStateTol) {
          throw std::invalid_argument(
              "family states violate orthonormality at (i=" +
              std::to_string(i) + ", j=" + std::to_string(j) +
              ", k=" + std::to_string(k) + ")");
        }
      }
    }
  }
}

PureState max_entangled(long long d, const std::string& label_a,
                        const std::string& label_b) {
  if (d < 2) throw std::invalid_argument("max_entangled requires d >= 2");
  SystemLayout layout({{label_a, d}, {label_b, d}});
  Vector amp = Vector::Zero(d * d);
  for (long long i = 0; i < d; ++i) amp[i * d + i] = 1.0 / std::sqrt(double(d));
  return PureState(std::move(layout), std::move(amp));
}

PureState max_coherent(long long d, const std::string& label) {
  if (d < 2) throw std::invalid_argument("max_coherent requires d >= 2");
  SystemLayout layout({{label, d}});
  Vector amp = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0.0));
  return PureState(std::move(layout), std::move(amp));
}

Matrix qft(long long d) {
  if (d < 2) throw std::invalid_argument("qft requires d >= 2");
  Matrix u(d, d);
  const double norm = 1.0 / std::sqrt(double(d));
  for (long long j = 0; j < d; ++j) {
    for (long long k = 0; k < d; ++k) {
      const double angle = 2.0 * std::numbers::pi * double((j * k) % d) / double(d);
      u(j, k) = norm * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return u;
}

PureState flower(long long d, const std::optional<Matrix>& u1) {
  if (d < 2) throw std::invalid_argument("flower requires d >= 2");
  const Matrix second = u1.value_or(qft(d));
  if (second.rows() != d || second.cols() != d || !is_unitary(second)) {
    throw std::invalid_argument("branch operator must be a d x d unitary");
  }
  const Matrix branches[2] = {Matrix::Identity(d, d), second};
  SystemLayout layout({{"R", d}, {"A", 2}, {"B", d}});
  Vector amp = Vector::Zero(layout.total_dim());
  const double norm = 1.0 / std::sqrt(2.0 * double(d));
  // amplitude of |r, i, j> is (U_i^T |j>)_r / sqrt(2d) = (U_i)_{j r} / sqrt(2d)
  for (long long r = 0; r < d; ++r) {
    for (long long i = 0; i < 2; ++i) {
      for (long long j = 0; j < d; ++j) {
        amp[r * 2 * d + i * d + j] = norm * branches[i](j, r);
      }
    }
  }
  return PureState(std::move(layout), std::move(amp));
}

DensityOperator separable_family_state(const SeparableFamily& family) {
  const long long rows = family.rows(), cols = family.cols();
  const long long dr = rows * cols, da = family.a_dim(), db = rows;
  SystemLayout layout({{"R", dr}, {"A", da}, {"B", db}});
  Matrix out = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      const double w = family.weight(int(i), int(j));
      if (w == 0.0) continue;
      const Vector& psi = family.state(int(i), int(j));
      const long long base = (i * cols + j) * da * db;  // block |ij>_R, |i>_B
      for (long long a = 0; a < da; ++a) {
        for (long long b = 0; b < da; ++b) {
          out(base + a * db + i, base + b * db + i) +=
              w * psi[a] * std::conj(psi[b]);
        }
      }
    }
  }
  return DensityOperator(std::move(layout), std::move(out));
}

PureState random_pure(const SystemLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector amp(layout.total_dim());
  for (long long i = 0; i < amp.size(); ++i) {
    const double re = gauss(rng), im = gauss(rng);
    amp[i] = Complex(re, im);
  }
  amp /= amp.norm();
  return PureState(layout, std::move(amp));
}

DensityOperator random_density(const SystemLayout& layout, long long rank,
                               std::uint64_t seed) {
  if (rank < 1 || rank > layout.total_dim()) {
    throw std::invalid_argument("rank must be in [1, total dimension]");
  }
  SystemLayout extended = layout.concat(SystemLayout({{"_anc", rank}}));
  PureState purification = random_pure(extended, seed);
  return partial_trace(purification, {"_anc"});
}

}  // namespace mergelab
