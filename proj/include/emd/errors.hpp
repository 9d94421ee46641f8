#pragma once

#include <stdexcept>
#include <string>

namespace emd {

enum class errc {
  zero_mass,
  negative_entry,
  odd_bins,
  length_mismatch,
  mass_mismatch,
  bad_rho,
  bad_size,
  cycle,
  multiple_roots,
  disconnected_node,
  non_positive_cost,
  duplicate_id,
  too_few_leaves,
  unknown_node,
  leaf_root_change,
  bad_params,
  shape_mismatch,
  too_large,
  zero_entry,
  bad_eps,
  zero_vector,
  non_finite,
  parse_error,
  solver_failure,
};

const char* to_string(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        raw_(what) {}

  errc code() const { return code_; }
  // Message without the code prefix, for callers that add their own context.
  const std::string& raw() const { return raw_; }

 private:
  errc code_;
  std::string raw_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

inline const char* to_string(errc c) {
  switch (c) {
    case errc::zero_mass: return "ZeroMass";
    case errc::negative_entry: return "NegativeEntry";
    case errc::odd_bins: return "OddBins";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::mass_mismatch: return "MassMismatch";
    case errc::bad_rho: return "BadRho";
    case errc::bad_size: return "BadSize";
    case errc::cycle: return "Cycle";
    case errc::multiple_roots: return "MultipleRoots";
    case errc::disconnected_node: return "DisconnectedNode";
    case errc::non_positive_cost: return "NonPositiveCost";
    case errc::duplicate_id: return "DuplicateId";
    case errc::too_few_leaves: return "TooFewLeaves";
    case errc::unknown_node: return "UnknownNode";
    case errc::leaf_root_change: return "LeafRootChange";
    case errc::bad_params: return "BadParams";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::too_large: return "TooLarge";
    case errc::zero_entry: return "ZeroEntry";
    case errc::bad_eps: return "BadEps";
    case errc::zero_vector: return "ZeroVector";
    case errc::non_finite: return "NonFinite";
    case errc::parse_error: return "ParseError";
    case errc::solver_failure: return "SolverFailure";
  }
  return "UnknownError";
}

}  // namespace emd
