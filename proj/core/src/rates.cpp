#include "mergelab/rates.hpp"

#include <cmath>

#include "mergelab/info.hpp"

namespace mergelab {

namespace {

void require_tripartite(const SystemLayout& layout) {
  for (const char* label : {"R", "A", "B"}) {
    if (!layout.has_label(label)) {
      throw std::invalid_argument(std::string("layout is missing label '") +
                                  label + "'");
    }
  }
}

}  // namespace

std::string to_string(PairClass c) {
  switch (c) {
    case PairClass::Excluded: return "excluded";
    case PairClass::Achievable: return "achievable";
    case PairClass::Unknown: return "unknown";
  }
  throw std::logic_error("unreachable");
}

double ec_sum_lower_bound(const DensityOperator& rho) {
  require_tripartite(rho.layout());
  return von_neumann_entropy(dephase(rho, {"A", "B"})) -
         von_neumann_entropy(dephase(rho, {"B"}));
}

double ec_sum_lower_bound(const PureState& psi) {
  return ec_sum_lower_bound(to_density(psi));
}

double e_min(const DensityOperator& rho) {
  require_tripartite(rho.layout());
  const DensityOperator rho_ab = partial_trace(rho, {"R"});
  const DensityOperator rho_b = partial_trace(rho_ab, {"A"});
  return von_neumann_entropy(rho_ab) - von_neumann_entropy(rho_b);
}

double e_min(const PureState& psi) { return e_min(to_density(psi)); }

double e0_pure(const PureState& psi) {
  require_tripartite(psi.layout());
  const DensityOperator rho_ab = partial_trace(psi, {"R"});
  const DensityOperator rho_b = partial_trace(rho_ab, {"A"});
  return von_neumann_entropy(dephase(rho_ab, {"A", "B"})) -
         von_neumann_entropy(dephase(rho_b, {"B"}));
}

double e0_pure(const DensityOperator& rho) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  if (std::abs(purity - 1.0) > 1e-9) {
    throw std::invalid_argument("e0_pure requires a pure global state (purity " +
                                std::to_string(purity) + ")");
  }
  require_tripartite(rho.layout());
  const DensityOperator rho_ab = partial_trace(rho, {"R"});
  const DensityOperator rho_b = partial_trace(rho_ab, {"A"});
  return von_neumann_entropy(dephase(rho_ab, {"A", "B"})) -
         von_neumann_entropy(dephase(rho_b, {"B"}));
}

RateBounds rate_bounds(const DensityOperator& rho) {
  RateBounds out;
  out.sum_lower = ec_sum_lower_bound(rho);
  out.e_min = e_min(rho);
  return out;
}

RateBounds rate_bounds(const PureState& psi) {
  RateBounds out = rate_bounds(to_density(psi));
  out.e0 = e0_pure(psi);
  return out;
}

PairClass classify_pair(const ResourcePair& pair, const RateBounds& bounds,
                        double tol) {
  const double sum = pair.entanglement + pair.coherence;
  if (sum < bounds.sum_lower - tol || pair.entanglement < bounds.e_min - tol) {
    return PairClass::Excluded;
  }
  // The proven achievable set is generated by (e0, 0) together with the
  // slope -1 ray toward negative coherence, closed under adding resources:
  // E >= e0 and E + C >= e0.
  if (bounds.e0 && pair.entanglement >= *bounds.e0 - tol && sum >= *bounds.e0 - tol) {
    return PairClass::Achievable;
  }
  return PairClass::Unknown;
}

ResourcePair timeshare(const ResourcePair& a, const ResourcePair& b, double p) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("timeshare weight outside [0, 1]");
  }
  return {p * a.entanglement + (1.0 - p) * b.entanglement,
          p * a.coherence + (1.0 - p) * b.coherence};
}

ResourcePair SeparableFamilyRates::frontier(double a) const {
  if (a < 0.0) throw std::invalid_argument("frontier parameter must be >= 0");
  return {a * c_max, (1.0 - a) * c_max};
}

SeparableFamilyRates separable_family_rates(const SeparableFamily& family) {
  SeparableFamilyRates out;
  SystemLayout a_layout({{"A", family.a_dim()}});
  for (int i = 0; i < family.rows(); ++i) {
    for (int j = 0; j < family.cols(); ++j) {
      const DensityOperator branch(
          a_layout, family.state(i, j) * family.state(i, j).adjoint());
      out.c_max +=
          family.weight(i, j) * von_neumann_entropy(dephase(branch, {"A"}));
    }
  }
  return out;
}

FlowerRates flower_rates(long long d) {
  if (d < 2) throw std::invalid_argument("flower_rates requires d >= 2");
  FlowerRates out;
  out.bounds.sum_lower = 1.0;
  out.bounds.e_min = 0.0;
  out.bounds.e0 = 1.0;
  out.coherence_floor = 1.0 + 0.5 * std::log2(double(d));
  return out;
}

}  // namespace mergelab
