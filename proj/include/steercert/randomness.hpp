#pragma once

#include <string>
#include <vector>

#include "steercert/assemblage.hpp"
#include "steercert/sdp.hpp"

namespace steercert {

/// Outcome of the one-sided device-independent guessing-probability program
/// for a single target setting.
struct RandomnessResult {
  std::vector<int> target_setting;  // m*, in the input scenario's arity
  double guessing_probability = 1.0;
  double random_bits = 0.0;  // -log2(G)
  double solver_gap = 0.0;

  /// Eve's optimal decomposition: one unnormalized sub-assemblage per guess
  /// value e, summing to the observed assemblage.
  std::vector<Assemblage> eve_strategy;
  /// Dual steering inequality on the merged single-box scenario; evaluates
  /// to G on the observed assemblage.
  std::vector<HermitianMatrix> dual_inequality;
  Scenario merged_scenario;

  sdp::SolveStatus status = sdp::SolveStatus::numerical_failure;
  std::string message;
};

/// Eve's maximal probability of guessing the untrusted outcome at setting
/// `target`, consistent with the observed assemblage. Two untrusted boxes
/// are merged into a single party with joint settings and outcomes; the
/// assemblage must be physical (validate first, project if necessary).
RandomnessResult guessing_probability(const Assemblage& a, const std::vector<int>& target,
                                      const sdp::SolverOptions& opts = {});

/// One result per setting tuple, sorted by certified random bits descending
/// (ties broken by setting order, so the output is deterministic).
std::vector<RandomnessResult> scan_targets(const Assemblage& a,
                                           const sdp::SolverOptions& opts = {});

/// Evaluate a dual inequality on an assemblage (merged-scenario layout).
double apply_dual_inequality(const std::vector<HermitianMatrix>& ineq, const Assemblage& a);

}  // namespace steercert
