#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "mergelab/channels.hpp"
#include "mergelab/coding.hpp"
#include "mergelab/info.hpp"
#include "mergelab/protocols.hpp"
#include "mergelab/qstate.hpp"
#include "mergelab/statezoo.hpp"

namespace mergelab {

/// Thrown for malformed input files.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using LoadedState = std::variant<PureState, DensityOperator>;

// State files: {"factors": [{"label": ..., "dim": ...}, ...],
//               "kind": "pure" | "mixed", "data": [[re, im], ...]}
// with row-major matrix flattening for mixed states.
std::string state_to_json(const PureState& psi);
std::string state_to_json(const DensityOperator& rho);
LoadedState state_from_json(const std::string& text);

// Channel files: {"kraus": [matrix, ...], "in_dim": n, "out_dim": m} with
// each matrix in the row-major [re, im] pair encoding of the state format.
std::string channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const std::string& text);

// Joint distributions as CSV with header "x,y,p", one row per nonzero entry.
std::string distribution_to_csv(const JointDistribution& p);
JointDistribution distribution_from_csv(const std::string& text);

// Code dumps for audit: {"n":, "N":, "f": flat table, "error_prob":}.
// Loading rebuilds the decoder from the stored binning and the distribution
// and verifies the stored error probability.
std::string swcode_to_json(const SWCode& code);
SWCode swcode_from_json(const std::string& text, const JointDistribution& p,
                        long long enumeration_budget = 1LL << 22);

// Separable families: {"p": [[...]], "states": [[matrix-as-rows...]]} where
// states[i][j] is the amplitude list of the j-th flagged state for flag i.
std::string family_to_json(const SeparableFamily& family);
SeparableFamily family_from_json(const std::string& text);

// Protocol run reports.
std::string report_to_json(const MergeOutcome& outcome,
                           const std::string& protocol);

}  // namespace mergelab
