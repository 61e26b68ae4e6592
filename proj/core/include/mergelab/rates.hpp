#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "mergelab/qstate.hpp"
#include "mergelab/statezoo.hpp"

namespace mergelab {

/// Entanglement and coherence consumed per copy; either may be negative
/// (negative means the resource is gained).
struct ResourcePair {
  double entanglement = 0.0;  // E, ebits per copy
  double coherence = 0.0;     // C, coherence bits per copy
};

/// Bounds delimiting the achievable (E, C) region for one state. e0 is
/// known only when the global state is pure; c_max only for families where
/// the full frontier is known.
struct RateBounds {
  double sum_lower = 0.0;  // lower bound on E + C
  double e_min = 0.0;      // lower bound on E
  std::optional<double> e0;
  std::optional<double> c_max;
};

enum class PairClass { Excluded, Achievable, Unknown };

std::string to_string(PairClass c);

/// Lower bound on E + C: S(dephase_{AB} rho) - S(dephase_B rho), with the
/// reference system untouched. Nonnegative for every state.
double ec_sum_lower_bound(const DensityOperator& rho);
double ec_sum_lower_bound(const PureState& psi);

/// Minimal entanglement rate S(rho_AB) - S(rho_B); may be negative.
double e_min(const DensityOperator& rho);
double e_min(const PureState& psi);

/// Entanglement rate at zero coherence budget for a pure global state:
/// the conditional entropy of the dephased reduction,
/// S(dephased rho_AB) - S(dephased rho_B). Coincides with the sum bound.
double e0_pure(const PureState& psi);
/// Overload validating purity of a density-operator input.
double e0_pure(const DensityOperator& rho);

/// Sum bound and e_min for any tripartite state; adds e0 for pure inputs.
RateBounds rate_bounds(const DensityOperator& rho);
RateBounds rate_bounds(const PureState& psi);

/// Classifies a candidate pair against the bounds. The region between the
/// proven bounds is genuinely open, hence the third value.
PairClass classify_pair(const ResourcePair& pair, const RateBounds& bounds,
                        double tol = 1e-9);

/// Componentwise convex combination, weight p on the first pair.
ResourcePair timeshare(const ResourcePair& a, const ResourcePair& b, double p);

/// Full solution for the classically flagged separable family: the frontier
/// is (a*c_max, (1-a)*c_max) for a >= 0.
struct SeparableFamilyRates {
  double c_max = 0.0;
  ResourcePair frontier(double a) const;
};

SeparableFamilyRates separable_family_rates(const SeparableFamily& family);

/// Closed-form bounds for the two-branch identity/QFT state, plus the
/// coherence rate floor 1 + log2(d)/2 that holds for one-way protocols with
/// exactly zero initial entanglement.
struct FlowerRates {
  RateBounds bounds;
  double coherence_floor = 0.0;
};

FlowerRates flower_rates(long long d);

}  // namespace mergelab
