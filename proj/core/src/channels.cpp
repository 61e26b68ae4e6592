#include "mergelab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mergelab/info.hpp"
#include "mergelab/statezoo.hpp"

namespace mergelab {

namespace {

constexpr double kSupportTol = 1e-12;

bool matrix_is_incoherent(const Matrix& k) {
  for (long long c = 0; c < k.cols(); ++c) {
    int nonzero = 0;
    for (long long r = 0; r < k.rows(); ++r) {
      if (std::abs(k(r, c)) > kSupportTol && ++nonzero > 1) return false;
    }
  }
  return true;
}

Matrix apply_raw(const std::vector<Matrix>& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(kraus[0].rows(), kraus[0].rows());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Matrix> kraus, SystemLayout input_layout,
                           SystemLayout output_layout)
    : kraus_(std::move(kraus)),
      in_(std::move(input_layout)),
      out_(std::move(output_layout)) {
  if (kraus_.empty()) throw std::invalid_argument("empty Kraus list");
  const long long din = in_.total_dim(), dout = out_.total_dim();
  Matrix sum = Matrix::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) {
      throw std::invalid_argument("Kraus operator shape mismatch");
    }
    sum += k.adjoint() * k;
  }
  const double dev =
      (sum - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (dev > kStateTol) {
    throw std::invalid_argument("Kraus completeness violated by " +
                                std::to_string(dev));
  }
}

KrausChannel KrausChannel::from_dims(std::vector<Matrix> kraus, long long in_dim,
                                     long long out_dim) {
  return KrausChannel(std::move(kraus), SystemLayout({{"X", in_dim}}),
                      SystemLayout({{"X", out_dim}}));
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  if (rho.layout().total_dim() != ch.in_dim()) {
    throw std::invalid_argument("state dimension does not match channel input");
  }
  return DensityOperator(ch.output_layout(), apply_raw(ch.kraus(), rho.matrix()));
}

bool is_incoherent(const KrausChannel& ch) {
  return std::all_of(ch.kraus().begin(), ch.kraus().end(),
                     matrix_is_incoherent);
}

bool is_strictly_incoherent(const KrausChannel& ch) {
  return std::all_of(ch.kraus().begin(), ch.kraus().end(), [](const Matrix& k) {
    return matrix_is_incoherent(k) && matrix_is_incoherent(k.adjoint());
  });
}

bool is_mio(const KrausChannel& ch) {
  const long long din = ch.in_dim();
  for (long long i = 0; i < din; ++i) {
    Matrix basis = Matrix::Zero(din, din);
    basis(i, i) = 1.0;
    const Matrix out = apply_raw(ch.kraus(), basis);
    for (long long r = 0; r < out.rows(); ++r) {
      for (long long c = 0; c < out.cols(); ++c) {
        if (r != c && std::abs(out(r, c)) > kStateTol) return false;
      }
    }
  }
  return true;
}

KrausChannel identity_channel(long long d) {
  return KrausChannel::from_dims({Matrix::Identity(d, d)}, d, d);
}

KrausChannel full_dephasing_channel(long long d) {
  std::vector<Matrix> kraus;
  for (long long i = 0; i < d; ++i) {
    Matrix k = Matrix::Zero(d, d);
    k(i, i) = 1.0;
    kraus.push_back(std::move(k));
  }
  return KrausChannel::from_dims(std::move(kraus), d, d);
}

KrausChannel unitary_channel(const Matrix& u) {
  if (!is_unitary(u)) throw std::invalid_argument("not a unitary");
  return KrausChannel::from_dims({u}, u.cols(), u.rows());
}

KrausChannel flower_decode_channel(long long d) {
  if (d < 2) throw std::invalid_argument("flower_decode_channel requires d >= 2");
  const Matrix branches[2] = {Matrix::Identity(d, d), qft(d)};
  std::vector<Matrix> kraus;
  // K_{i,k} = |i,k><k| U_i / sqrt(2); the output records the branch flag and
  // the dephased rotated input.
  for (long long i = 0; i < 2; ++i) {
    for (long long k = 0; k < d; ++k) {
      Matrix op = Matrix::Zero(2 * d, d);
      op.row(i * d + k) = branches[i].row(k) / std::sqrt(2.0);
      kraus.push_back(std::move(op));
    }
  }
  return KrausChannel(std::move(kraus), SystemLayout({{"B", d}}),
                      SystemLayout({{"B~", 2}, {"B", d}}));
}

KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) {
      Matrix k(ka.rows() * kb.rows(), ka.cols() * kb.cols());
      for (long long r = 0; r < ka.rows(); ++r) {
        for (long long c = 0; c < ka.cols(); ++c) {
          k.block(r * kb.rows(), c * kb.cols(), kb.rows(), kb.cols()) =
              ka(r, c) * kb;
        }
      }
      kraus.push_back(std::move(k));
    }
  }
  return KrausChannel::from_dims(std::move(kraus), a.in_dim() * b.in_dim(),
                                 a.out_dim() * b.out_dim());
}

namespace {

double output_entropy_bits(const std::vector<Matrix>& kraus, const Vector& phi) {
  Matrix sigma = Matrix::Zero(kraus[0].rows(), kraus[0].rows());
  for (const auto& k : kraus) {
    const Vector v = k * phi;
    sigma.noalias() += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam > kEntropyEigenFloor) s -= lam * std::log2(lam);
  }
  return s;
}

// Riemannian gradient descent of the output entropy over the unit sphere of
// pure inputs, with backtracking line search. Returns the entropy in bits.
double descend(const std::vector<Matrix>& kraus, Vector phi) {
  const int max_iters = 400;
  double current = output_entropy_bits(kraus, phi);
  double step = 0.5;
  for (int it = 0; it < max_iters; ++it) {
    // sigma and its log on the (clamped) support
    Matrix sigma = Matrix::Zero(kraus[0].rows(), kraus[0].rows());
    for (const auto& k : kraus) {
      const Vector v = k * phi;
      sigma.noalias() += v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    Eigen::VectorXd logs = es.eigenvalues();
    for (long long i = 0; i < logs.size(); ++i) {
      logs[i] = std::log(std::max(logs[i], 1e-18));
    }
    const Matrix log_sigma = es.eigenvectors() * logs.asDiagonal() *
                             es.eigenvectors().adjoint();
    // descent direction is +sum K^dag (log sigma + I) K phi, projected onto
    // the tangent space of the sphere
    Vector grad = Vector::Zero(phi.size());
    for (const auto& k : kraus) grad.noalias() += k.adjoint() * (log_sigma * (k * phi));
    grad += phi;
    Vector dir = grad - phi * phi.dot(grad);
    const double dir_norm = dir.norm();
    if (dir_norm < 1e-10) break;
    dir /= dir_norm;

    bool moved = false;
    while (step > 1e-12) {
      Vector trial = phi + step * dir;
      trial /= trial.norm();
      const double value = output_entropy_bits(kraus, trial);
      if (value < current - 1e-15) {
        phi = std::move(trial);
        current = value;
        step = std::min(step * 2.0, 1.0);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return current;
}

}  // namespace

double min_output_entropy(const KrausChannel& ch, int restarts,
                          std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(r + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector phi(ch.in_dim());
    for (long long i = 0; i < phi.size(); ++i) {
      phi[i] = Complex(gauss(rng), gauss(rng));
    }
    phi /= phi.norm();
    best = std::min(best, descend(ch.kraus(), phi));
    if (best < 1e-13) break;  // entropy cannot go below zero
  }
  return best;
}

Matrix random_unitary(long long d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(d, d);
  for (long long r = 0; r < d; ++r) {
    for (long long c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // fix the phase gauge so the distribution is Haar
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long long i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

namespace {

// Shared scaffolding for random incoherent channels: each Kraus operator k
// maps basis column m to basis row target[k][m] with amplitude c[k][m], and
// the amplitudes per column form a unit vector across k.
KrausChannel incoherent_from_maps(
    const std::vector<std::vector<long long>>& targets, long long d,
    std::mt19937_64& rng) {
  const std::size_t count = targets.size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> kraus(count, Matrix::Zero(d, d));
  for (long long m = 0; m < d; ++m) {
    Vector column(count);
    for (std::size_t k = 0; k < count; ++k) {
      column[k] = Complex(gauss(rng), gauss(rng));
    }
    column /= column.norm();
    for (std::size_t k = 0; k < count; ++k) {
      kraus[k](targets[k][m], m) = column[k];
    }
  }
  return KrausChannel::from_dims(std::move(kraus), d, d);
}

}  // namespace

KrausChannel random_sio_channel(long long d, int kraus_count,
                                std::mt19937_64& rng) {
  std::vector<std::vector<long long>> targets(kraus_count);
  for (auto& perm : targets) {
    perm.resize(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  return incoherent_from_maps(targets, d, rng);
}

KrausChannel random_io_channel(long long d, std::mt19937_64& rng) {
  // Collapse onto a random orthonormal basis, writing each outcome into a
  // random basis target: K_a = |t_a><u_a|. Each column of K_a has a single
  // nonzero, but the adjoints are full rows, so these channels are
  // incoherent without being strictly incoherent.
  const Matrix u = random_unitary(d, rng);
  std::uniform_int_distribution<long long> pick(0, d - 1);
  std::vector<Matrix> kraus;
  for (long long a = 0; a < d; ++a) {
    Matrix k = Matrix::Zero(d, d);
    k.row(pick(rng)) = u.col(a).adjoint();
    kraus.push_back(std::move(k));
  }
  return KrausChannel::from_dims(std::move(kraus), d, d);
}

KrausChannel random_channel(long long d, int kraus_count,
                            std::mt19937_64& rng) {
  // Haar isometry d -> d * kraus_count, sliced into Kraus blocks.
  const Matrix u = random_unitary(d * kraus_count, rng);
  const Matrix iso = u.leftCols(d);
  std::vector<Matrix> kraus;
  for (int e = 0; e < kraus_count; ++e) {
    kraus.push_back(iso.middleRows(e * d, d));
  }
  return KrausChannel::from_dims(std::move(kraus), d, d);
}

}  // namespace mergelab
