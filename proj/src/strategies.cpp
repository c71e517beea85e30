#include "steercert/strategies.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace steercert {

std::vector<DeterministicStrategy> enumerate_deterministic(int n_settings, int n_outcomes) {
  if (n_settings < 1 || n_outcomes < 1) {
    throw std::invalid_argument("enumerate_deterministic: counts must be >= 1");
  }
  const double count = std::pow(static_cast<double>(n_outcomes), n_settings);
  if (count > 1e6) {
    throw std::invalid_argument("enumerate_deterministic: " + std::to_string(count) +
                                " strategies exceed the 1e6 enumeration guard");
  }
  const long total = static_cast<long>(std::llround(count));
  std::vector<DeterministicStrategy> out;
  out.reserve(total);
  for (long mu = 0; mu < total; ++mu) {
    DeterministicStrategy s{n_settings, n_outcomes, std::vector<int>(n_settings, 0)};
    long rest = mu;
    for (int x = n_settings - 1; x >= 0; --x) {
      s.response[x] = static_cast<int>(rest % n_outcomes);
      rest /= n_outcomes;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::pair<DeterministicStrategy, DeterministicStrategy>> product_strategies(
    const std::vector<DeterministicStrategy>& sa, const std::vector<DeterministicStrategy>& sb) {
  if (sa.empty() || sb.empty()) {
    throw std::invalid_argument("product_strategies: strategy lists must be non-empty");
  }
  if (sa.size() * sb.size() > 1000000) {
    throw std::invalid_argument("product_strategies: product exceeds the 1e6 enumeration guard");
  }
  std::vector<std::pair<DeterministicStrategy, DeterministicStrategy>> out;
  out.reserve(sa.size() * sb.size());
  for (const auto& a : sa)
    for (const auto& b : sb) out.emplace_back(a, b);
  return out;
}

}  // namespace steercert
