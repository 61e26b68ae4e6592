#include "mergelab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mergelab {

SystemLayout::SystemLayout(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.dim <= 0) {
      throw std::invalid_argument("factor '" + f.label +
                                  "' has non-positive dimension");
    }
    if (!seen.insert(f.label).second) {
      throw std::invalid_argument("duplicate label '" + f.label +
                                  "' in layout");
    }
    total_dim_ *= f.dim;
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * factors_[i].dim;
  }
}

bool SystemLayout::has_label(const std::string& label) const {
  for (const auto& f : factors_) {
    if (f.label == label) return true;
  }
  return false;
}

std::size_t SystemLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw std::invalid_argument("unknown label '" + label + "'");
}

std::vector<std::size_t> SystemLayout::indices_of(
    const std::vector<std::string>& labels) const {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
  for (const auto& f : other.factors_) {
    if (has_label(f.label)) {
      throw std::invalid_argument("duplicate label '" + f.label +
                                  "' when joining layouts");
    }
  }
  std::vector<Factor> joined = factors_;
  joined.insert(joined.end(), other.factors_.begin(), other.factors_.end());
  return SystemLayout(std::move(joined));
}

SystemLayout SystemLayout::drop(const std::vector<std::string>& labels) const {
  auto idx = indices_of(labels);
  std::vector<Factor> kept;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) {
      kept.push_back(factors_[i]);
    }
  }
  return SystemLayout(std::move(kept));
}

SystemLayout SystemLayout::relabeled(const std::string& from,
                                     const std::string& to) const {
  std::vector<Factor> renamed = factors_;
  renamed[index_of(from)].label = to;
  return SystemLayout(std::move(renamed));
}

bool SystemLayout::operator==(const SystemLayout& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label != other.factors_[i].label ||
        factors_[i].dim != other.factors_[i].dim) {
      return false;
    }
  }
  return true;
}

PureState::PureState(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
  if (amp_.size() != layout_.total_dim()) {
    throw std::invalid_argument("amplitude vector size " +
                                std::to_string(amp_.size()) +
                                " does not match layout dimension " +
                                std::to_string(layout_.total_dim()));
  }
  if (std::abs(amp_.norm() - 1.0) > kStateTol) {
    throw std::invalid_argument("state vector is not normalized (norm " +
                                std::to_string(amp_.norm()) + ")");
  }
}

PureState PureState::relabeled(const std::string& from,
                               const std::string& to) const {
  return PureState(layout_.relabeled(from, to), amp_);
}

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), mat_(std::move(matrix)) {
  const long long d = layout_.total_dim();
  if (mat_.rows() != d || mat_.cols() != d) {
    throw std::invalid_argument("matrix size does not match layout dimension " +
                                std::to_string(d));
  }
  const double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kStateTol) {
    throw std::invalid_argument("matrix is not Hermitian (deviation " +
                                std::to_string(herm_dev) + ")");
  }
  const double tr_dev = std::abs(mat_.trace().real() - 1.0) +
                        std::abs(mat_.trace().imag());
  if (tr_dev > kStateTol) {
    throw std::invalid_argument("matrix trace deviates from 1 by " +
                                std::to_string(tr_dev));
  }
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kStateTol) {
    throw std::invalid_argument("matrix is not positive semidefinite (min "
                                "eigenvalue " + std::to_string(min_eig) + ")");
  }
  if (min_eig < 0.0) {
    Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
    mat_ = es.eigenvectors() * clamped.asDiagonal() *
           es.eigenvectors().adjoint();
  }
}

DensityOperator DensityOperator::relabeled(const std::string& from,
                                           const std::string& to) const {
  return DensityOperator(layout_.relabeled(from, to), mat_);
}

PureState tensor(const PureState& a, const PureState& b) {
  SystemLayout joined = a.layout().concat(b.layout());
  Vector amp(joined.total_dim());
  const long long db = b.layout().total_dim();
  for (long long i = 0; i < a.amplitudes().size(); ++i) {
    amp.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
  }
  return PureState(std::move(joined), std::move(amp));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  SystemLayout joined = a.layout().concat(b.layout());
  const long long da = a.layout().total_dim();
  const long long db = b.layout().total_dim();
  Matrix out(da * db, da * db);
  for (long long i = 0; i < da; ++i) {
    for (long long j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return DensityOperator(std::move(joined), std::move(out));
}

DensityOperator to_density(const PureState& psi) {
  Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityOperator(psi.layout(), std::move(m));
}

namespace {

// Decomposes a flat index into (kept part, dropped part) given the factor
// split, returning flat indices within the kept and dropped sublayouts.
struct IndexSplit {
  std::vector<long long> keep_dims, drop_dims;
  std::vector<long long> keep_strides, drop_strides;  // strides in the source
  long long keep_total = 1, drop_total = 1;

  IndexSplit(const SystemLayout& layout, const std::vector<std::size_t>& drop) {
    for (std::size_t i = 0; i < layout.factor_count(); ++i) {
      const bool dropped =
          std::find(drop.begin(), drop.end(), i) != drop.end();
      if (dropped) {
        drop_dims.push_back(layout.factor(i).dim);
        drop_strides.push_back(layout.stride(i));
        drop_total *= layout.factor(i).dim;
      } else {
        keep_dims.push_back(layout.factor(i).dim);
        keep_strides.push_back(layout.stride(i));
        keep_total *= layout.factor(i).dim;
      }
    }
  }

  // Flat source index from (kept flat index, dropped flat index).
  long long source_index(long long keep_flat, long long drop_flat) const {
    long long idx = 0;
    for (std::size_t i = keep_dims.size(); i-- > 0;) {
      idx += (keep_flat % keep_dims[i]) * keep_strides[i];
      keep_flat /= keep_dims[i];
    }
    for (std::size_t i = drop_dims.size(); i-- > 0;) {
      idx += (drop_flat % drop_dims[i]) * drop_strides[i];
      drop_flat /= drop_dims[i];
    }
    return idx;
  }
};

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& drop) {
  const auto drop_idx = rho.layout().indices_of(drop);
  IndexSplit split(rho.layout(), drop_idx);
  Matrix out = Matrix::Zero(split.keep_total, split.keep_total);
  for (long long r = 0; r < split.keep_total; ++r) {
    for (long long c = 0; c < split.keep_total; ++c) {
      Complex sum = 0.0;
      for (long long t = 0; t < split.drop_total; ++t) {
        sum += rho.matrix()(split.source_index(r, t), split.source_index(c, t));
      }
      out(r, c) = sum;
    }
  }
  return DensityOperator(rho.layout().drop(drop), std::move(out));
}

DensityOperator partial_trace(const PureState& psi,
                              const std::vector<std::string>& drop) {
  return partial_trace(to_density(psi), drop);
}

DensityOperator dephase(const DensityOperator& rho,
                        const std::vector<std::string>& subsystems) {
  const auto idx = rho.layout().indices_of(subsystems);
  const long long d = rho.layout().total_dim();
  Matrix out = rho.matrix();
  for (long long r = 0; r < d; ++r) {
    for (long long c = 0; c < d; ++c) {
      for (std::size_t k : idx) {
        const long long dim = rho.layout().factor(k).dim;
        const long long stride = rho.layout().stride(k);
        if ((r / stride) % dim != (c / stride) % dim) {
          out(r, c) = 0.0;
          break;
        }
      }
    }
  }
  return DensityOperator(rho.layout(), std::move(out));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!(rho.layout() == sigma.layout())) {
    throw std::invalid_argument("trace_distance requires matching layouts");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) {
    throw std::invalid_argument("trace_distance requires matching layouts");
  }
  // 1 - |<b|a>|^2 computed through the residual of a against b, which stays
  // accurate when the states nearly coincide
  const Complex c = b.amplitudes().dot(a.amplitudes());
  const double one_minus_fid = (a.amplitudes() - c * b.amplitudes()).squaredNorm();
  return 2.0 * std::sqrt(std::max(0.0, one_minus_fid));
}

double overlap(const PureState& psi, const DensityOperator& rho) {
  if (!(psi.layout() == rho.layout())) {
    throw std::invalid_argument("overlap requires matching layouts");
  }
  const Complex v = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return v.real();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

Matrix lift_operator(const SystemLayout& layout, const Matrix& u,
                     const std::vector<std::string>& targets) {
  const auto idx = layout.indices_of(targets);
  {
    std::set<std::size_t> uniq(idx.begin(), idx.end());
    if (uniq.size() != idx.size()) {
      throw std::invalid_argument("repeated target label");
    }
  }
  long long target_dim = 1;
  for (std::size_t k : idx) target_dim *= layout.factor(k).dim;
  if (u.rows() != target_dim || u.cols() != target_dim) {
    throw std::invalid_argument(
        "operator size " + std::to_string(u.rows()) +
        " does not match target dimension " + std::to_string(target_dim));
  }
  const long long d = layout.total_dim();
  // Flat target sub-index of a full index, honoring the given target order.
  auto target_part = [&](long long flat) {
    long long t = 0;
    for (std::size_t k : idx) {
      const long long dim = layout.factor(k).dim;
      t = t * dim + (flat / layout.stride(k)) % dim;
    }
    return t;
  };
  auto rest_part = [&](long long flat) {
    long long r = 0;
    for (std::size_t i = 0; i < layout.factor_count(); ++i) {
      if (std::find(idx.begin(), idx.end(), i) != idx.end()) continue;
      const long long dim = layout.factor(i).dim;
      r = r * dim + (flat / layout.stride(i)) % dim;
    }
    return r;
  };
  Matrix full = Matrix::Zero(d, d);
  for (long long r = 0; r < d; ++r) {
    const long long tr = target_part(r), rr = rest_part(r);
    for (long long c = 0; c < d; ++c) {
      if (rest_part(c) != rr) continue;
      full(r, c) = u(tr, target_part(c));
    }
  }
  return full;
}

PureState apply_unitary(const PureState& state, const Matrix& u,
                        const std::vector<std::string>& targets) {
  if (!is_unitary(u)) {
    throw std::invalid_argument("operator is not unitary within tolerance");
  }
  Matrix full = lift_operator(state.layout(), u, targets);
  return PureState(state.layout(), full * state.amplitudes());
}

DensityOperator apply_unitary(const DensityOperator& state, const Matrix& u,
                              const std::vector<std::string>& targets) {
  if (!is_unitary(u)) {
    throw std::invalid_argument("operator is not unitary within tolerance");
  }
  Matrix full = lift_operator(state.layout(), u, targets);
  return DensityOperator(state.layout(), full * state.matrix() * full.adjoint());
}

namespace {

// Index permutation realizing a factor reordering: entry i is the source
// flat index of destination flat index i.
std::vector<long long> reorder_map(const SystemLayout& layout,
                                   const std::vector<std::string>& order,
                                   SystemLayout& target) {
  if (order.size() != layout.factor_count()) {
    throw std::invalid_argument("reorder needs every label exactly once");
  }
  const auto perm = layout.indices_of(order);
  {
    std::set<std::size_t> uniq(perm.begin(), perm.end());
    if (uniq.size() != perm.size()) {
      throw std::invalid_argument("reorder needs every label exactly once");
    }
  }
  std::vector<Factor> factors;
  for (std::size_t k : perm) factors.push_back(layout.factor(k));
  target = SystemLayout(std::move(factors));
  std::vector<long long> map(std::size_t(layout.total_dim()), 0);
  for (long long dst = 0; dst < layout.total_dim(); ++dst) {
    long long src = 0, rest = dst;
    for (std::size_t i = perm.size(); i-- > 0;) {
      const long long dim = target.factor(i).dim;
      src += (rest % dim) * layout.stride(perm[i]);
      rest /= dim;
    }
    map[std::size_t(dst)] = src;
  }
  return map;
}

}  // namespace

PureState reorder(const PureState& state, const std::vector<std::string>& order) {
  SystemLayout target;
  const auto map = reorder_map(state.layout(), order, target);
  Vector amp(state.amplitudes().size());
  for (long long i = 0; i < amp.size(); ++i) {
    amp[i] = state.amplitudes()[map[std::size_t(i)]];
  }
  return PureState(std::move(target), std::move(amp));
}

DensityOperator reorder(const DensityOperator& state,
                        const std::vector<std::string>& order) {
  SystemLayout target;
  const auto map = reorder_map(state.layout(), order, target);
  const long long d = state.layout().total_dim();
  Matrix mat(d, d);
  for (long long r = 0; r < d; ++r) {
    for (long long c = 0; c < d; ++c) {
      mat(r, c) = state.matrix()(map[std::size_t(r)], map[std::size_t(c)]);
    }
  }
  return DensityOperator(std::move(target), std::move(mat));
}

PureState basis_state(const SystemLayout& layout,
                      const std::vector<long long>& indices) {
  if (indices.size() != layout.factor_count()) {
    throw std::invalid_argument("need one basis index per factor");
  }
  long long flat = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= layout.factor(i).dim) {
      throw std::invalid_argument("basis index out of range for factor '" +
                                  layout.factor(i).label + "'");
    }
    flat += indices[i] * layout.stride(i);
  }
  Vector amp = Vector::Zero(layout.total_dim());
  amp[flat] = 1.0;
  return PureState(layout, std::move(amp));
}

DensityOperator maximally_mixed(const SystemLayout& layout) {
  const long long d = layout.total_dim();
  return DensityOperator(layout, Matrix::Identity(d, d) / double(d));
}

}  // namespace mergelab
