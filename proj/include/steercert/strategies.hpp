#pragma once

#include <utility>
#include <vector>

namespace steercert {

/// Fixed input -> output response function; extreme point of the local
/// conditional-probability polytope.
struct DeterministicStrategy {
  int n_settings = 0;
  int n_outcomes = 0;
  std::vector<int> response;  // response[setting] = outcome

  /// Indicator D(a|x): 1 if the strategy answers a on input x.
  double operator()(int outcome, int setting) const {
    return response[setting] == outcome ? 1.0 : 0.0;
  }
};

/// All n_outcomes^n_settings deterministic strategies in lexicographic order:
/// strategy mu responds with the base-n_outcomes digits of mu, most
/// significant digit on setting 0.
std::vector<DeterministicStrategy> enumerate_deterministic(int n_settings, int n_outcomes);

/// Cartesian product of two strategy lists, first index major.
std::vector<std::pair<DeterministicStrategy, DeterministicStrategy>> product_strategies(
    const std::vector<DeterministicStrategy>& sa, const std::vector<DeterministicStrategy>& sb);

}  // namespace steercert
