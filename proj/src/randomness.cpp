#include "steercert/randomness.hpp"

#include <algorithm>
#include <cmath>

namespace steercert {

using sdp::MatrixExpr;
using sdp::ScalarExpr;
using sdp::SdpProblem;
using sdp::Sense;
using sdp::VarId;

namespace {

std::string key(std::initializer_list<int> parts) {
  std::string out;
  for (int p : parts) out += "_" + std::to_string(p);
  return out;
}

// Equalize the per-setting totals exactly; the inputs are required physical
// so this moves entries by at most the validation tolerance, and it makes
// the non-signalling rows of the program exactly consistent.
Assemblage exact_ns(const Assemblage& a) {
  Assemblage out = a;
  const int m = out.scenario.joint_settings();
  const int o = out.scenario.joint_outcomes();
  HermitianMatrix mean_total = HermitianMatrix::zero(out.scenario.trusted_dim);
  for (int s = 0; s < m; ++s) mean_total += out.total_for_setting(s);
  mean_total = mean_total * (1.0 / m);
  for (int s = 0; s < m; ++s) {
    const HermitianMatrix shift = (mean_total - out.total_for_setting(s)) * (1.0 / o);
    for (int oc = 0; oc < o; ++oc) out.at_flat(oc, s) += shift;
  }
  return out;
}

}  // namespace

RandomnessResult guessing_probability(const Assemblage& input, const std::vector<int>& target,
                                      const sdp::SolverOptions& opts) {
  const auto rep = validate(input, 1e-7);
  if (rep.signalling_residual > 1e-7 || !rep.normalization_ok || !rep.psd_ok) {
    throw std::invalid_argument(
        "guessing_probability: assemblage is not physical (" + rep.summary() +
        "); project it onto the non-signalling set first (project-ns)");
  }
  const int target_index = input.scenario.setting_index(target);

  // merge two untrusted boxes into a single party with joint settings and
  // outcomes; the program is agnostic to the internal box structure
  const Assemblage merged = exact_ns(merge_untrusted(input));
  const int m = merged.scenario.joint_settings();
  const int S = merged.scenario.joint_outcomes();
  const int d = merged.scenario.trusted_dim;

  // Every sub-assemblage member is dominated by the observed one, so it
  // lives inside that member's support. Parametrizing on the support keeps
  // the program strictly feasible even for pure-state data, where members
  // are rank deficient and the unreduced program has no interior.
  std::vector<Cmat> support(static_cast<size_t>(S) * m);  // d x rank isometry
  std::vector<HermitianMatrix> reduced_target(support.size(),
                                              HermitianMatrix::zero(1));
  constexpr double kRankTol = 1e-11;
  for (int s = 0; s < S; ++s)
    for (int mm = 0; mm < m; ++mm) {
      const auto& member = merged.at_flat(s, mm);
      Eigen::SelfAdjointEigenSolver<Cmat> es(member.mat());
      int rank = 0;
      for (int k = 0; k < d; ++k)
        if (es.eigenvalues()[k] > kRankTol) ++rank;
      Cmat iso(d, rank);
      for (int k = 0, c = 0; k < d; ++k)
        if (es.eigenvalues()[k] > kRankTol) iso.col(c++) = es.eigenvectors().col(k);
      support[static_cast<size_t>(s) * m + mm] = iso;
      if (rank > 0) {
        reduced_target[static_cast<size_t>(s) * m + mm] =
            HermitianMatrix(iso.adjoint() * member.mat() * iso, 1e-7);
      }
    }

  SdpProblem p;
  // reduced variables: sigma^e_{s|m} = iso * var * iso^dagger
  std::vector<VarId> sub(static_cast<size_t>(S) * S * m, -1);
  auto idx = [&](int e, int s, int mm) { return (static_cast<size_t>(e) * S + s) * m + mm; };
  auto rank_of = [&](int s, int mm) {
    return static_cast<int>(support[static_cast<size_t>(s) * m + mm].cols());
  };
  for (int e = 0; e < S; ++e)
    for (int s = 0; s < S; ++s)
      for (int mm = 0; mm < m; ++mm) {
        const int rk = rank_of(s, mm);
        if (rk > 0) sub[idx(e, s, mm)] = p.add_hermitian_var("e" + key({e, s, mm}), rk);
      }

  // reproduction of the observed assemblage in support coordinates
  for (int s = 0; s < S; ++s)
    for (int mm = 0; mm < m; ++mm) {
      const int rk = rank_of(s, mm);
      if (rk == 0) continue;
      MatrixExpr lhs(rk);
      for (int e = 0; e < S; ++e) lhs.add(1.0, sub[idx(e, s, mm)]);
      p.add_equality(lhs, reduced_target[static_cast<size_t>(s) * m + mm],
                     "rep" + key({s, mm}));
    }
  // non-signalling of each sub-assemblage; the last guess value is implied
  // by reproduction once the observed totals agree across settings
  for (int e = 0; e + 1 < S; ++e)
    for (int mm = 1; mm < m; ++mm) {
      MatrixExpr lhs(d);
      for (int s = 0; s < S; ++s) {
        if (sub[idx(e, s, mm)] >= 0)
          lhs.add_sandwich(1.0, sub[idx(e, s, mm)], support[static_cast<size_t>(s) * m + mm]);
        if (sub[idx(e, s, 0)] >= 0)
          lhs.add_sandwich(-1.0, sub[idx(e, s, 0)], support[static_cast<size_t>(s) * m + 0]);
      }
      p.add_equality(lhs, HermitianMatrix::zero(d), "ns" + key({e, mm}));
    }

  ScalarExpr obj;
  for (int e = 0; e < S; ++e) {
    if (sub[idx(e, e, target_index)] >= 0) obj.add_trace(1.0, sub[idx(e, e, target_index)]);
  }
  p.set_objective(Sense::maximize, obj);

  const auto sol = p.solve(opts);

  RandomnessResult res;
  res.target_setting = target;
  res.merged_scenario = merged.scenario;
  res.status = sol.status;
  res.message = sol.message;
  res.solver_gap = sol.duality_gap;
  if (sol.status != sdp::SolveStatus::optimal) {
    res.message = "guessing_probability: solver failed (" + sol.message + ")";
    return res;
  }

  const double lower = 1.0 / S;
  res.guessing_probability = std::clamp(sol.primal_value, lower, 1.0);
  res.random_bits = -std::log2(res.guessing_probability);

  res.eve_strategy.reserve(S);
  for (int e = 0; e < S; ++e) {
    Assemblage strat(merged.scenario, "eve-strategy");
    for (int s = 0; s < S; ++s)
      for (int mm = 0; mm < m; ++mm) {
        if (sub[idx(e, s, mm)] < 0) continue;
        const auto& iso = support[static_cast<size_t>(s) * m + mm];
        const auto& val = sol.variables.at("e" + key({e, s, mm}));
        strat.at_flat(s, mm) = HermitianMatrix(iso * val.mat() * iso.adjoint(), 1e-7);
      }
    res.eve_strategy.push_back(std::move(strat));
  }
  // reproduction multipliers lift back to support-supported witness blocks
  res.dual_inequality.assign(static_cast<size_t>(S) * m, HermitianMatrix::zero(d));
  for (int s = 0; s < S; ++s)
    for (int mm = 0; mm < m; ++mm) {
      if (rank_of(s, mm) == 0) continue;
      const auto& iso = support[static_cast<size_t>(s) * m + mm];
      const auto& fr = sol.dual_matrices.at("rep" + key({s, mm}));
      res.dual_inequality[static_cast<size_t>(mm) * S + s] =
          HermitianMatrix(iso * fr.mat() * iso.adjoint(), 1e-7);
    }
  return res;
}

std::vector<RandomnessResult> scan_targets(const Assemblage& a, const sdp::SolverOptions& opts) {
  std::vector<RandomnessResult> out;
  for (int mm = 0; mm < a.scenario.joint_settings(); ++mm) {
    out.push_back(guessing_probability(a, a.scenario.setting_tuple(mm), opts));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return l.random_bits > r.random_bits;
  });
  return out;
}

double apply_dual_inequality(const std::vector<HermitianMatrix>& ineq, const Assemblage& a) {
  const Assemblage merged = merge_untrusted(a);
  if (ineq.size() != merged.members.size()) {
    throw std::invalid_argument("apply_dual_inequality: shape mismatch");
  }
  double value = 0.0;
  for (size_t k = 0; k < ineq.size(); ++k) value += hs_inner(ineq[k], merged.members[k]);
  return value;
}

}  // namespace steercert
