#include "mergelab/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "mergelab/channels.hpp"
#include "mergelab/info.hpp"
#include "mergelab/rates.hpp"

namespace mergelab {

namespace {

constexpr double kDistanceSlack = 1e-9;

long long ipow(long long base, int exp) {
  long long out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

// Digitwise arithmetic on length-n words in a fixed base, most significant
// digit first.
struct WordArith {
  int n;
  long long base;
  std::vector<long long> pow;  // pow[i] = base^{n-1-i}

  WordArith(int n_, long long base_) : n(n_), base(base_), pow(n_) {
    for (int i = 0; i < n; ++i) pow[i] = ipow(base, n - 1 - i);
  }
  long long digit(long long word, int i) const { return (word / pow[i]) % base; }
  long long diff_mod(long long a, long long b) const {
    long long out = 0;
    for (int i = 0; i < n; ++i) {
      out += ((digit(a, i) - digit(b, i) + base) % base) * pow[i];
    }
    return out;
  }
  long long dot_mod(long long a, long long b) const {
    long long out = 0;
    for (int i = 0; i < n; ++i) out += digit(a, i) * digit(b, i);
    return out % base;
  }
};

double ceil_log2(long long n) {
  return n <= 1 ? 0.0 : double(std::bit_width(std::uint64_t(n - 1)));
}

// Trace norm of sum_i s_i f_i f_i^dag from the Gram matrix G = F^dag F and
// the signature S: the nonzero spectrum equals that of G^1/2 S G^1/2.
double trace_norm_from_gram(const Matrix& gram,
                            const Eigen::VectorXd& signature) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix half =
      es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix h = half * signature.asDiagonal() * half;
  Eigen::SelfAdjointEigenSolver<Matrix> hes(h, Eigen::EigenvaluesOnly);
  return hes.eigenvalues().cwiseAbs().sum();
}

}  // namespace

MergeOutcome merge_pure(const PureState& psi, int n, const SWCode& code,
                        const MergeOptions& options) {
  const SystemLayout& layout = psi.layout();
  if (layout.factor_count() != 3 || !layout.has_label("R") ||
      !layout.has_label("A") || !layout.has_label("B")) {
    throw std::invalid_argument("merge_pure needs a layout with factors R, A, B");
  }
  const long long dr = layout.factor(layout.index_of("R")).dim;
  const long long dx = layout.factor(layout.index_of("A")).dim;
  const long long dy = layout.factor(layout.index_of("B")).dim;
  if (code.n != n || code.x_alphabet != dx || code.y_alphabet != dy) {
    throw std::invalid_argument("code does not match the state's alphabets");
  }

  // Referee vectors m_xy = <x,y|psi>, columns indexed by x*dy + y. The
  // protocol state always lies in the span of products of these vectors, so
  // the n-copy run is tracked per (x^n, y^n) branch instead of densely.
  Matrix m(dr, dx * dy);
  {
    const std::size_t ri = layout.index_of("R"), ai = layout.index_of("A"),
                      bi = layout.index_of("B");
    for (long long flat = 0; flat < layout.total_dim(); ++flat) {
      const long long r = (flat / layout.stride(ri)) % dr;
      const long long x = (flat / layout.stride(ai)) % dx;
      const long long y = (flat / layout.stride(bi)) % dy;
      m(r, x * dy + y) = psi.amplitudes()[flat];
    }
  }
  Eigen::MatrixXd p_table(dx, dy);
  for (long long x = 0; x < dx; ++x) {
    for (long long y = 0; y < dy; ++y) {
      p_table(x, y) = m.col(x * dy + y).squaredNorm();
    }
  }
  const JointDistribution p(p_table / p_table.sum());

  const WordArith xa(n, dx);
  const long long xw = code.x_words(), yw = code.y_words(), nbins = code.num_bins;
  if (double(xw) * double(yw) > double(options.branch_budget)) {
    throw budget_error("merging needs " + std::to_string(double(xw) * double(yw)) +
                       " branches, over the budget of " +
                       std::to_string(options.branch_budget));
  }
  if (xw > options.gram_cap) {
    throw budget_error("measurement branch count " + std::to_string(xw) +
                       " exceeds the cap of " + std::to_string(options.gram_cap));
  }

  const double sw_error = error_probability(code, p);

  // Bob's decode isometry as a map: the register holding the decoded word is
  // a direct sum of the X^n sector and a reserve sector tagged by the bin.
  // Injectivity of the map is what makes V an isometry; verify it and the
  // support consistency of the code's good set against this state.
  std::vector<long long> w_slot(std::size_t(nbins * yw), 0);
  {
    std::vector<std::uint8_t> hit(std::size_t((xw + nbins) * yw), 0);
    for (long long nu = 0; nu < nbins; ++nu) {
      for (long long y = 0; y < yw; ++y) {
        const GtildeOutput out = gtilde(code, nu, y);
        const long long slot = out.reserve ? xw + out.first : out.first;
        w_slot[std::size_t(nu * yw + y)] = slot;
        auto& cell = hit[std::size_t(slot * yw + y)];
        if (cell) {
          throw std::logic_error("decode map is not injective; Bob's isometry "
                                 "is invalid");
        }
        cell = 1;
      }
    }
  }
  for (long long x = 0; x < xw; ++x) {
    for (long long y = 0; y < yw; ++y) {
      const bool decode_ok = code.decode(code.f[std::size_t(x)], y) == x;
      if (block_probability(p, n, x, y) > 1e-12 && decode_ok &&
          !code.in_good_set(x, y)) {
        throw std::invalid_argument(
            "code good set does not cover this state's support; build the "
            "code from this state's distribution");
      }
    }
  }

  // Gram matrix of the d^n corrected measurement branches plus the target.
  const long long k_count = xw;
  Matrix gram = Matrix::Zero(k_count + 1, k_count + 1);
  std::vector<Complex> omega(std::size_t(dx), Complex(0.0, 0.0));
  for (long long t = 0; t < dx; ++t) {
    const double angle = 2.0 * std::numbers::pi * double(t) / double(dx);
    omega[std::size_t(t)] = Complex(std::cos(angle), std::sin(angle));
  }
  const double branch_norm = 1.0 / double(xw);  // d^{-n}
  const bool gamma_diagonal = [&] {
    const Matrix gamma = m.adjoint() * m;
    for (long long a = 0; a < gamma.rows(); ++a) {
      for (long long b = 0; b < gamma.cols(); ++b) {
        if (a != b && std::abs(gamma(a, b)) > 1e-12) return false;
      }
    }
    return true;
  }();

  double total_mass = 0.0;
  for (long long x = 0; x < xw; ++x) {
    for (long long y = 0; y < yw; ++y) {
      total_mass += block_probability(p, n, x, y);
    }
  }

  if (gamma_diagonal) {
    // Orthogonal referee branches: inner products depend only on the
    // difference of the two outcomes, via characters of Z_d^n.
    std::vector<double> weight(std::size_t(xw), 0.0);
    double good_mass = 0.0;
    for (long long x = 0; x < xw; ++x) {
      const long long nu = code.f[std::size_t(x)];
      for (long long y = 0; y < yw; ++y) {
        const double pb = block_probability(p, n, x, y);
        if (pb == 0.0) continue;
        const long long slot = w_slot[std::size_t(nu * yw + y)];
        const long long shift =
            slot < xw ? xa.diff_mod(slot, x) : xa.diff_mod(0, x);
        weight[std::size_t(shift)] += pb;
        if (slot == x) good_mass += pb;
      }
    }
    std::vector<Complex> ghat(std::size_t(xw), Complex(0.0, 0.0));
    for (long long gamma_w = 0; gamma_w < xw; ++gamma_w) {
      Complex acc(0.0, 0.0);
      for (long long k = 0; k < xw; ++k) {
        if (weight[std::size_t(k)] == 0.0) continue;
        acc += weight[std::size_t(k)] * omega[std::size_t(xa.dot_mod(gamma_w, k))];
      }
      ghat[std::size_t(gamma_w)] = branch_norm * acc;
    }
    for (long long a = 0; a < k_count; ++a) {
      for (long long b = 0; b < k_count; ++b) {
        gram(a, b) = ghat[std::size_t(xa.diff_mod(b, a))];
      }
    }
    const Complex cross(good_mass / std::sqrt(double(xw)), 0.0);
    for (long long a = 0; a < k_count; ++a) {
      gram(a, k_count) = cross;
      gram(k_count, a) = std::conj(cross);
    }
  } else {
    // General referee overlaps: only pairs within one bin share a decoded
    // slot, and contributions separate into characters of the two outcomes.
    const Matrix gamma = m.adjoint() * m;
    std::vector<std::vector<long long>> bins{std::size_t(nbins)};
    for (long long x = 0; x < xw; ++x) {
      bins[std::size_t(code.f[std::size_t(x)])].push_back(x);
    }
    double pair_work = 0.0;
    for (const auto& bin : bins) {
      pair_work += double(bin.size()) * double(bin.size());
    }
    pair_work *= double(yw);
    if (pair_work > double(1LL << 24)) {
      throw budget_error(
          "referee vectors are not orthogonal and the bin-pair work " +
          std::to_string(pair_work) + " is over budget");
    }
    auto gamma_product = [&](long long xc, long long xk, long long y) {
      Complex out(1.0, 0.0);
      long long a = xc, b = xk, yy = y;
      for (int i = 0; i < n; ++i) {
        const long long ydig = yy % dy;
        out *= gamma((a % dx) * dy + ydig, (b % dx) * dy + ydig);
        a /= dx;
        b /= dx;
        yy /= dy;
      }
      return out;
    };
    Matrix coeff = Matrix::Zero(xw, xw);
    std::vector<Complex> cross(std::size_t(xw), Complex(0.0, 0.0));
    for (long long y = 0; y < yw; ++y) {
      for (long long nu = 0; nu < nbins; ++nu) {
        const auto& bin = bins[std::size_t(nu)];
        if (bin.empty()) continue;
        const long long slot = w_slot[std::size_t(nu * yw + y)];
        const bool good = slot < xw;
        for (long long xc : bin) {
          const long long a = good ? xa.diff_mod(xc, slot) : xc;
          for (long long xk : bin) {
            const long long b = good ? xa.diff_mod(xk, slot) : xk;
            coeff(a, b) += branch_norm * gamma_product(xc, xk, y);
          }
          if (good) {
            cross[std::size_t(a)] +=
                gamma_product(xc, slot, y) / std::sqrt(double(xw));
          }
        }
      }
    }
    Matrix characters(k_count, xw);
    for (long long alpha = 0; alpha < k_count; ++alpha) {
      for (long long a = 0; a < xw; ++a) {
        characters(alpha, a) = omega[std::size_t(xa.dot_mod(alpha, a))];
      }
    }
    gram.topLeftCorner(k_count, k_count) =
        characters * coeff * characters.adjoint();
    for (long long alpha = 0; alpha < k_count; ++alpha) {
      Complex acc(0.0, 0.0);
      for (long long a = 0; a < xw; ++a) acc += characters(alpha, a) * cross[std::size_t(a)];
      gram(alpha, k_count) = acc;
      gram(k_count, alpha) = std::conj(acc);
    }
  }
  gram(k_count, k_count) = total_mass;

  Eigen::VectorXd signature = Eigen::VectorXd::Ones(k_count + 1);
  signature[k_count] = -1.0;
  const double target_distance = trace_norm_from_gram(gram, signature);

  if (target_distance > 2.0 * std::sqrt(sw_error) + kDistanceSlack) {
    throw std::logic_error("merged state misses the 2 sqrt(eps) bound: " +
                           std::to_string(target_distance) + " vs error " +
                           std::to_string(sw_error));
  }

  MergeOutcome outcome;
  outcome.sw_error = sw_error;
  outcome.target_distance = target_distance;
  outcome.ledger.n = n;
  outcome.ledger.ebits_consumed = ceil_log2(nbins);
  outcome.transcript = {
      {"append bin index", "Alice", "isometry |x^n> -> |x^n>|f(x^n)>"},
      {"teleport index register", "Alice->Bob",
       std::to_string((long long)outcome.ledger.ebits_consumed) + " ebits"},
      {"decode isometry", "Bob",
       "injective map on (bin, side info); incoherent by construction"},
      {"conjugate-basis measurement", "Alice",
       "outcomes alpha^n sent to Bob; applied as one controlled-diagonal "
       "unitary"},
      {"diagonal corrections", "Bob", "Z^alpha_i on each decoded factor"},
  };

  // Per-copy resources must respect the entanglement-coherence sum bound.
  const double per_copy = outcome.ledger.entanglement_rate() +
                          outcome.ledger.coherence_rate();
  if (per_copy < ec_sum_lower_bound(psi) - 1e-6) {
    throw std::logic_error("ledger violates the sum lower bound");
  }

  const long long w_dim = xw + nbins;
  const double full_dim = std::pow(double(dr), n) * double(w_dim) *
                          std::pow(double(dy), n);
  if (full_dim <= double(options.materialize_dim)) {
    std::vector<Factor> factors;
    for (int i = 0; i < n; ++i) factors.push_back({"R" + std::to_string(i + 1), dr});
    factors.push_back({"W", w_dim});
    for (int i = 0; i < n; ++i) factors.push_back({"B" + std::to_string(i + 1), dy});
    SystemLayout out_layout(std::move(factors));
    const long long rn = ipow(dr, n);
    Matrix avg = Matrix::Zero(out_layout.total_dim(), out_layout.total_dim());
    const double coef_norm = 1.0 / std::sqrt(double(xw));
    for (long long alpha = 0; alpha < xw; ++alpha) {
      Vector chi = Vector::Zero(out_layout.total_dim());
      for (long long x = 0; x < xw; ++x) {
        const long long nu = code.f[std::size_t(x)];
        for (long long y = 0; y < yw; ++y) {
          const long long slot = w_slot[std::size_t(nu * yw + y)];
          Complex coef = coef_norm * std::conj(omega[std::size_t(xa.dot_mod(alpha, x))]);
          if (slot < xw) coef *= omega[std::size_t(xa.dot_mod(alpha, slot))];
          for (long long r = 0; r < rn; ++r) {
            Complex prod = coef;
            long long rr = r, xx = x, yy = y;
            for (int i = 0; i < n; ++i) {
              prod *= m(rr % dr, (xx % dx) * dy + (yy % dy));
              rr /= dr;
              xx /= dx;
              yy /= dy;
            }
            chi[(r * w_dim + slot) * yw + y] += prod;
          }
        }
      }
      avg.noalias() += chi * chi.adjoint();
    }
    outcome.final_state = DensityOperator(std::move(out_layout), std::move(avg));
  }
  return outcome;
}

MergeOutcome merge_flower(long long d) {
  if (d < 2) throw std::invalid_argument("merge_flower requires d >= 2");
  const PureState psi = flower(d);
  const PureState target = reorder(psi.relabeled("A", "B~"), {"R", "B~", "B"});
  const Matrix branches[2] = {Matrix::Identity(d, d), qft(d)};
  Matrix controlled = Matrix::Zero(2 * d, 2 * d);
  controlled.topLeftCorner(d, d) = branches[0];
  controlled.bottomRightCorner(d, d) = branches[1];

  MergeOutcome outcome;
  outcome.ledger.n = 1;
  Matrix avg;
  double worst_branch = 0.0;
  for (long long i = 0; i < 2; ++i) {
    // Alice's computational-basis outcome i, taken with probability 1/2;
    // the residual state is (1 x U_i) |Phi_d>.
    Vector residual(d * d);
    for (long long r = 0; r < d; ++r) {
      for (long long b = 0; b < d; ++b) {
        residual[r * d + b] =
            psi.amplitudes()[r * 2 * d + i * d + b] * std::sqrt(2.0);
      }
    }
    PureState state(SystemLayout({{"R", d}, {"B", d}}), std::move(residual));
    state = apply_unitary(state, branches[i].adjoint(), {"B"});
    PureState with_ancilla = tensor(state, max_coherent(2, "B~"));
    with_ancilla = apply_unitary(with_ancilla, controlled, {"B~", "B"});
    const PureState branch_final = reorder(with_ancilla, {"R", "B~", "B"});
    worst_branch = std::max(worst_branch, trace_distance(branch_final, target));
    const Matrix proj =
        branch_final.amplitudes() * branch_final.amplitudes().adjoint();
    if (avg.size() == 0) {
      avg = 0.5 * proj;
    } else {
      avg += 0.5 * proj;
    }
  }
  if (worst_branch > kDistanceSlack) {
    throw std::logic_error("flower branch failed to reconstruct the state");
  }

  // The controlled rotation is the one non-incoherent step Bob performs;
  // charge the coherence it can generate from basis inputs, plus the cobit
  // spent on |+>.
  SystemLayout cu_layout({{"B~", 2}, {"B", d}});
  double generated = 0.0;
  for (long long b = 0; b < 2 * d; ++b) {
    const Vector column = controlled.col(b);
    generated = std::max(
        generated, rel_entropy_coherence(
                       DensityOperator(cu_layout, column * column.adjoint())));
  }
  outcome.ledger.cobits_consumed = 1.0 + generated;
  outcome.analytic_coherence_rate = 1.0 + 0.5 * std::log2(double(d));

  if (2 * d * d <= 1024) {
    DensityOperator averaged(target.layout(), std::move(avg));
    outcome.target_distance = trace_distance(averaged, to_density(target));
    outcome.final_state = std::move(averaged);
  } else {
    outcome.target_distance = worst_branch;
  }
  outcome.transcript = {
      {"computational-basis measurement", "Alice", "branch flag i sent to Bob"},
      {"undo branch rotation", "Bob", "U_i^dag; incoherent only for i = 0"},
      {"prepare |+>", "Bob", "1 cobit"},
      {"controlled branch rotation", "Bob",
       "|0><0| x 1 + |1><1| x QFT; coherence charged to the ledger"},
  };
  return outcome;
}

MergeOutcome merge_separable(const SeparableFamily& family) {
  const DensityOperator rho = separable_family_state(family);
  const DensityOperator target = rho.relabeled("A", "B~");
  const long long rows = family.rows(), cols = family.cols();

  MergeOutcome outcome;
  outcome.ledger.n = 1;
  Matrix avg = Matrix::Zero(target.layout().total_dim(),
                            target.layout().total_dim());
  SystemLayout a_layout({{"A", family.a_dim()}});
  for (long long i = 0; i < rows; ++i) {
    Matrix bob = Matrix::Zero(rows, rows);
    bob(i, i) = 1.0;
    const Matrix bob_proj = lift_operator(rho.layout(), bob, {"B"});
    for (long long j = 0; j < cols; ++j) {
      const double weight = family.weight(int(i), int(j));
      const Vector& psi_ij = family.state(int(i), int(j));
      if (weight == 0.0) continue;
      const Matrix alice_proj = lift_operator(
          rho.layout(), Matrix(psi_ij * psi_ij.adjoint()), {"A"});
      Matrix post = alice_proj * bob_proj * rho.matrix() * bob_proj * alice_proj;
      const double prob = post.trace().real();
      if (std::abs(prob - weight) > 1e-9) {
        throw std::logic_error("branch probability mismatch at (i=" +
                               std::to_string(i) + ", j=" + std::to_string(j) +
                               ")");
      }
      const DensityOperator branch(rho.layout(), post / prob);
      // Alice's share is measured away; Bob re-prepares the flagged state.
      DensityOperator recovered =
          tensor(partial_trace(branch, {"A"}),
                 DensityOperator(SystemLayout({{"B~", family.a_dim()}}),
                                 psi_ij * psi_ij.adjoint()));
      recovered = reorder(recovered, {"R", "B~", "B"});
      const PureState expected = tensor(
          tensor(basis_state(SystemLayout({{"R", rows * cols}}), {i * cols + j}),
                 PureState(SystemLayout({{"B~", family.a_dim()}}), psi_ij)),
          basis_state(SystemLayout({{"B", rows}}), {i}));
      if (trace_distance(recovered, to_density(expected)) > kDistanceSlack) {
        throw std::logic_error("branch reconstruction failed at (i=" +
                               std::to_string(i) + ", j=" + std::to_string(j) +
                               ")");
      }
      avg += weight * recovered.matrix();
      outcome.ledger.cobits_consumed +=
          weight * von_neumann_entropy(dephase(
                       DensityOperator(a_layout, psi_ij * psi_ij.adjoint()),
                       {"A"}));
    }
  }
  DensityOperator averaged(target.layout(), std::move(avg));
  outcome.target_distance = trace_distance(averaged, target);
  if (outcome.target_distance > kDistanceSlack) {
    throw std::logic_error("separable merge failed to reconstruct the state");
  }
  outcome.final_state = std::move(averaged);
  outcome.transcript = {
      {"basis measurement", "Bob", "outcome i sent to Alice"},
      {"flagged-basis measurement", "Alice", "outcome j sent to Bob"},
      {"prepare flagged state", "Bob",
       "coherence cost of each branch charged in expectation"},
  };
  return outcome;
}

MergeOutcome incoherent_schumacher(const DensityOperator& rho, int n,
                                   const SWCode& code,
                                   const MergeOptions& options) {
  if (rho.layout().factor_count() != 1) {
    throw std::invalid_argument(
        "incoherent_schumacher compresses a single system");
  }
  const long long d = rho.layout().total_dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Vector amp = Vector::Zero(d * d);
  for (long long k = 0; k < d; ++k) {
    const double lam = std::max(0.0, es.eigenvalues()[k]);
    if (lam == 0.0) continue;
    for (long long a = 0; a < d; ++a) {
      amp[k * d + a] = std::sqrt(lam) * es.eigenvectors()(a, k);
    }
  }
  amp /= amp.norm();
  PureState purified(SystemLayout({{"R", d}, {"A", d}}), std::move(amp));
  const PureState embedded =
      tensor(purified, basis_state(SystemLayout({{"B", 1}}), {0}));
  return merge_pure(embedded, n, code, options);
}

std::vector<double> lqicc_monotonicity_probe(
    const DensityOperator& rho, const std::vector<std::string>& incoherent_side,
    int steps, std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  std::vector<std::string> quantum_side;
  for (const auto& f : rho.layout().factors()) {
    if (std::find(incoherent_side.begin(), incoherent_side.end(), f.label) ==
        incoherent_side.end()) {
      quantum_side.push_back(f.label);
    }
  }
  if (quantum_side.empty() || incoherent_side.empty()) {
    throw std::invalid_argument("probe needs both a quantum and an incoherent side");
  }
  long long dq = 1, di = 1;
  for (const auto& l : quantum_side) {
    dq *= rho.layout().factor(rho.layout().index_of(l)).dim;
  }
  for (const auto& l : incoherent_side) {
    di *= rho.layout().factor(rho.layout().index_of(l)).dim;
  }

  std::mt19937_64 rng(seed);
  auto random_incoherent_unitary = [&](long long dim) {
    std::vector<long long> perm(std::size_t(dim), 0);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Matrix v = Matrix::Zero(dim, dim);
    for (long long c = 0; c < dim; ++c) {
      const double a = angle(rng);
      v(perm[std::size_t(c)], c) = Complex(std::cos(a), std::sin(a));
    }
    return v;
  };

  std::vector<double> trace;
  trace.push_back(qi_relative_entropy(rho, incoherent_side));
  DensityOperator state = rho;
  for (int s = 0; s < steps; ++s) {
    const int kind = int(rng() % 4);
    if (kind == 0) {
      state = apply_unitary(state, random_unitary(dq, rng), quantum_side);
    } else if (kind == 1) {
      // projective dephasing of the quantum side in a random basis
      const Matrix u = random_unitary(dq, rng);
      Matrix next = Matrix::Zero(state.matrix().rows(), state.matrix().cols());
      for (long long k = 0; k < dq; ++k) {
        const Vector col = u.col(k);
        const Matrix proj = lift_operator(state.layout(),
                                          Matrix(col * col.adjoint()),
                                          quantum_side);
        next += proj * state.matrix() * proj;
      }
      state = DensityOperator(state.layout(), std::move(next));
    } else if (kind == 2) {
      state = apply_unitary(state, random_incoherent_unitary(di), incoherent_side);
    } else {
      // one-way round: measure the quantum side in a random basis and apply
      // an outcome-controlled incoherent unitary on the other side
      const Matrix u = random_unitary(dq, rng);
      Matrix next = Matrix::Zero(state.matrix().rows(), state.matrix().cols());
      for (long long k = 0; k < dq; ++k) {
        const Vector col = u.col(k);
        const Matrix proj = lift_operator(state.layout(),
                                          Matrix(col * col.adjoint()),
                                          quantum_side);
        const Matrix correction = lift_operator(
            state.layout(), random_incoherent_unitary(di), incoherent_side);
        const Matrix op = correction * proj;
        next += op * state.matrix() * op.adjoint();
      }
      state = DensityOperator(state.layout(), std::move(next));
    }
    const double value = qi_relative_entropy(state, incoherent_side);
    if (value > trace.back() + 1e-9) {
      throw std::logic_error("QI relative entropy increased under an LQICC round");
    }
    trace.push_back(value);
  }
  return trace;
}

}  // namespace mergelab
