#include "steercert/assemblage.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace steercert {

Scenario Scenario::one_untrusted(int trusted_dim, int settings, int outcomes) {
  Scenario s;
  s.n_untrusted = 1;
  s.settings_per_untrusted = {settings};
  s.outcomes_per_untrusted = {outcomes};
  s.trusted_dim = trusted_dim;
  s.validate();
  return s;
}

Scenario Scenario::two_untrusted(int trusted_dim, int settings, int outcomes) {
  Scenario s;
  s.n_untrusted = 2;
  s.settings_per_untrusted = {settings, settings};
  s.outcomes_per_untrusted = {outcomes, outcomes};
  s.trusted_dim = trusted_dim;
  s.validate();
  return s;
}

void Scenario::validate() const {
  if (n_untrusted != 1 && n_untrusted != 2) {
    throw std::invalid_argument("Scenario: n_untrusted must be 1 or 2");
  }
  if (static_cast<int>(settings_per_untrusted.size()) != n_untrusted ||
      static_cast<int>(outcomes_per_untrusted.size()) != n_untrusted) {
    throw std::invalid_argument("Scenario: settings/outcomes lists must match n_untrusted");
  }
  for (int v : settings_per_untrusted)
    if (v < 2) throw std::invalid_argument("Scenario: need at least 2 settings per party");
  for (int v : outcomes_per_untrusted)
    if (v < 2) throw std::invalid_argument("Scenario: need at least 2 outcomes per party");
  if (trusted_dim < 2) throw std::invalid_argument("Scenario: trusted_dim must be >= 2");
}

int Scenario::joint_settings() const {
  return std::accumulate(settings_per_untrusted.begin(), settings_per_untrusted.end(), 1,
                         std::multiplies<int>());
}

int Scenario::joint_outcomes() const {
  return std::accumulate(outcomes_per_untrusted.begin(), outcomes_per_untrusted.end(), 1,
                         std::multiplies<int>());
}

int Scenario::setting_index(const std::vector<int>& settings) const {
  if (static_cast<int>(settings.size()) != n_untrusted) {
    throw std::invalid_argument("Scenario: setting tuple has wrong arity");
  }
  int idx = 0;
  for (int k = 0; k < n_untrusted; ++k) {
    if (settings[k] < 0 || settings[k] >= settings_per_untrusted[k]) {
      throw std::out_of_range("Scenario: setting out of range");
    }
    idx = idx * settings_per_untrusted[k] + settings[k];
  }
  return idx;
}

int Scenario::outcome_index(const std::vector<int>& outcomes) const {
  if (static_cast<int>(outcomes.size()) != n_untrusted) {
    throw std::invalid_argument("Scenario: outcome tuple has wrong arity");
  }
  int idx = 0;
  for (int k = 0; k < n_untrusted; ++k) {
    if (outcomes[k] < 0 || outcomes[k] >= outcomes_per_untrusted[k]) {
      throw std::out_of_range("Scenario: outcome out of range");
    }
    idx = idx * outcomes_per_untrusted[k] + outcomes[k];
  }
  return idx;
}

std::vector<int> Scenario::setting_tuple(int index) const {
  std::vector<int> t(n_untrusted);
  for (int k = n_untrusted - 1; k >= 0; --k) {
    t[k] = index % settings_per_untrusted[k];
    index /= settings_per_untrusted[k];
  }
  return t;
}

std::vector<int> Scenario::outcome_tuple(int index) const {
  std::vector<int> t(n_untrusted);
  for (int k = n_untrusted - 1; k >= 0; --k) {
    t[k] = index % outcomes_per_untrusted[k];
    index /= outcomes_per_untrusted[k];
  }
  return t;
}

Assemblage::Assemblage(Scenario sc, std::string prov)
    : scenario(std::move(sc)), provenance(std::move(prov)) {
  scenario.validate();
  members.assign(static_cast<size_t>(scenario.joint_settings()) * scenario.joint_outcomes(),
                 HermitianMatrix::zero(scenario.trusted_dim));
}

const HermitianMatrix& Assemblage::at(const std::vector<int>& outcomes,
                                      const std::vector<int>& settings) const {
  return at_flat(scenario.outcome_index(outcomes), scenario.setting_index(settings));
}

HermitianMatrix& Assemblage::at(const std::vector<int>& outcomes,
                                const std::vector<int>& settings) {
  return at_flat(scenario.outcome_index(outcomes), scenario.setting_index(settings));
}

const HermitianMatrix& Assemblage::at_flat(int outcome_index, int setting_index) const {
  return members.at(static_cast<size_t>(setting_index) * scenario.joint_outcomes() +
                    outcome_index);
}

HermitianMatrix& Assemblage::at_flat(int outcome_index, int setting_index) {
  return members.at(static_cast<size_t>(setting_index) * scenario.joint_outcomes() +
                    outcome_index);
}

HermitianMatrix Assemblage::total_for_setting(int setting_index) const {
  HermitianMatrix total = HermitianMatrix::zero(scenario.trusted_dim);
  for (int a = 0; a < scenario.joint_outcomes(); ++a) total += at_flat(a, setting_index);
  return total;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "psd " << (psd_ok ? "ok" : "FAIL") << " (violation " << psd_violation << "), "
     << "normalization " << (normalization_ok ? "ok" : "FAIL") << " (residual "
     << normalization_residual << "), "
     << "non-signalling " << (signalling_ok ? "ok" : "FAIL") << " (residual "
     << signalling_residual << ")";
  return os.str();
}

Assemblage build_one_untrusted(const HermitianMatrix& rho, const std::vector<Povm>& povms,
                               int untrusted_subsystem, const std::vector<int>& dims) {
  int total_dim = 1;
  for (int d : dims) total_dim *= d;
  if (total_dim != rho.dim()) {
    throw std::invalid_argument("build_one_untrusted: dims do not match state dimension");
  }
  if (untrusted_subsystem < 0 || untrusted_subsystem >= static_cast<int>(dims.size())) {
    throw std::invalid_argument("build_one_untrusted: untrusted subsystem out of range");
  }
  if (!rho.is_psd(1e-8)) {
    throw std::invalid_argument("build_one_untrusted: state not positive semidefinite");
  }
  if (povms.empty()) throw std::invalid_argument("build_one_untrusted: no POVMs given");
  const int du = dims[untrusted_subsystem];
  int outcomes = static_cast<int>(povms.front().elements.size());
  for (const auto& p : povms) {
    p.validate();
    if (p.dim() != du) {
      throw std::invalid_argument("build_one_untrusted: POVM dimension does not match subsystem");
    }
    if (p.outcomes() != outcomes) {
      throw std::invalid_argument("build_one_untrusted: POVMs must share an outcome count");
    }
  }

  std::vector<int> keep;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (k != untrusted_subsystem) keep.push_back(k);
  const int trusted_dim = total_dim / du;

  Scenario sc = Scenario::one_untrusted(trusted_dim, static_cast<int>(povms.size()), outcomes);
  Assemblage out(sc, "quantum");
  for (int x = 0; x < sc.settings_per_untrusted[0]; ++x) {
    for (int a = 0; a < outcomes; ++a) {
      // (M_{a|x} on the untrusted factor, identity elsewhere) applied to rho.
      HermitianMatrix op = HermitianMatrix::identity(1);
      for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
        op = kron(op, k == untrusted_subsystem ? povms[x].elements[a]
                                               : HermitianMatrix::identity(dims[k]));
      }
      // (M (x) 1) rho is not Hermitian on its own, but its partial trace over
      // the measured factor is; symmetrizing first keeps types honest without
      // changing the result.
      HermitianMatrix weighted(0.5 * (op.mat() * rho.mat() + rho.mat() * op.mat()), 1e-9);
      out.at({a}, {x}) = partial_trace(weighted, dims, keep);
    }
  }
  out.validated = true;
  return out;
}

Assemblage build_two_untrusted(const HermitianMatrix& rho, const std::vector<Povm>& povms_a,
                               const std::vector<Povm>& povms_b) {
  if (rho.dim() != 8) {
    throw std::invalid_argument("build_two_untrusted: expected a three-qubit state (dim 8)");
  }
  if (!rho.is_psd(1e-8)) {
    throw std::invalid_argument("build_two_untrusted: state not positive semidefinite");
  }
  if (povms_a.empty() || povms_b.empty()) {
    throw std::invalid_argument("build_two_untrusted: POVM lists must be non-empty");
  }
  const int oa = povms_a.front().outcomes(), ob = povms_b.front().outcomes();
  for (const auto& p : povms_a) {
    p.validate();
    if (p.dim() != 2 || p.outcomes() != oa)
      throw std::invalid_argument("build_two_untrusted: inconsistent POVMs for A");
  }
  for (const auto& p : povms_b) {
    p.validate();
    if (p.dim() != 2 || p.outcomes() != ob)
      throw std::invalid_argument("build_two_untrusted: inconsistent POVMs for B");
  }

  Scenario sc;
  sc.n_untrusted = 2;
  sc.settings_per_untrusted = {static_cast<int>(povms_a.size()),
                               static_cast<int>(povms_b.size())};
  sc.outcomes_per_untrusted = {oa, ob};
  sc.trusted_dim = 2;
  sc.validate();

  Assemblage out(sc, "quantum");
  const std::vector<int> dims = {2, 2, 2};
  for (int x = 0; x < sc.settings_per_untrusted[0]; ++x)
    for (int y = 0; y < sc.settings_per_untrusted[1]; ++y)
      for (int a = 0; a < oa; ++a)
        for (int b = 0; b < ob; ++b) {
          HermitianMatrix op = kron(kron(povms_a[x].elements[a], povms_b[y].elements[b]),
                                    HermitianMatrix::identity(2));
          HermitianMatrix weighted(0.5 * (op.mat() * rho.mat() + rho.mat() * op.mat()), 1e-9);
          out.at({a, b}, {x, y}) = partial_trace(weighted, dims, {2});
        }
  out.validated = true;
  return out;
}

Assemblage maximally_mixed_assemblage(const Scenario& scenario) {
  Assemblage out(scenario, "maximally-mixed");
  const double scale = 1.0 / (scenario.trusted_dim * scenario.joint_outcomes());
  const HermitianMatrix member = HermitianMatrix::identity(scenario.trusted_dim) * scale;
  for (auto& m : out.members) m = member;
  out.validated = true;
  return out;
}

Assemblage trace_out_trusted_subsystem(const Assemblage& asm_bc, int drop) {
  if (asm_bc.scenario.trusted_dim != 4) {
    throw std::invalid_argument(
        "trace_out_trusted_subsystem: assemblage must have two trusted qubits (dim 4)");
  }
  if (drop != 0 && drop != 1) {
    throw std::invalid_argument("trace_out_trusted_subsystem: drop index must be 0 or 1");
  }
  Scenario sc = asm_bc.scenario;
  sc.trusted_dim = 2;
  Assemblage out(sc, asm_bc.provenance);
  out.validated = asm_bc.validated;
  const std::vector<int> keep = {drop == 0 ? 1 : 0};
  for (int s = 0; s < sc.joint_settings(); ++s)
    for (int a = 0; a < sc.joint_outcomes(); ++a)
      out.at_flat(a, s) = partial_trace(asm_bc.at_flat(a, s), {2, 2}, keep);
  return out;
}

ValidationReport validate(const Assemblage& a, double tol) {
  ValidationReport rep;
  rep.tolerance = tol;
  for (const auto& m : a.members) {
    rep.psd_violation = std::max(rep.psd_violation, std::max(0.0, -m.min_eigenvalue()));
  }
  for (int s = 0; s < a.scenario.joint_settings(); ++s) {
    rep.normalization_residual =
        std::max(rep.normalization_residual, std::abs(a.total_for_setting(s).trace() - 1.0));
  }

  // Signalling: each party's reduced assemblage must not depend on the other
  // party's setting. Only meaningful with two untrusted parties; for one the
  // residual is the spread of the trusted-side totals across settings.
  if (a.scenario.n_untrusted == 2) {
    const int ma = a.scenario.settings_per_untrusted[0];
    const int mb = a.scenario.settings_per_untrusted[1];
    const int oa = a.scenario.outcomes_per_untrusted[0];
    const int ob = a.scenario.outcomes_per_untrusted[1];
    // A-side reduction sum_b sigma_{ab|xy} compared across y.
    for (int x = 0; x < ma; ++x)
      for (int aa = 0; aa < oa; ++aa) {
        HermitianMatrix ref = HermitianMatrix::zero(a.scenario.trusted_dim);
        for (int y = 0; y < mb; ++y) {
          HermitianMatrix red = HermitianMatrix::zero(a.scenario.trusted_dim);
          for (int bb = 0; bb < ob; ++bb) red += a.at({aa, bb}, {x, y});
          if (y == 0) {
            ref = red;
          } else {
            rep.signalling_residual =
                std::max(rep.signalling_residual, red.frobenius_distance(ref));
          }
        }
      }
    for (int y = 0; y < mb; ++y)
      for (int bb = 0; bb < ob; ++bb) {
        HermitianMatrix ref = HermitianMatrix::zero(a.scenario.trusted_dim);
        for (int x = 0; x < ma; ++x) {
          HermitianMatrix red = HermitianMatrix::zero(a.scenario.trusted_dim);
          for (int aa = 0; aa < oa; ++aa) red += a.at({aa, bb}, {x, y});
          if (x == 0) {
            ref = red;
          } else {
            rep.signalling_residual =
                std::max(rep.signalling_residual, red.frobenius_distance(ref));
          }
        }
      }
  }
  // Totals per setting must agree across settings in every scenario.
  HermitianMatrix total0 = a.total_for_setting(0);
  for (int s = 1; s < a.scenario.joint_settings(); ++s) {
    rep.signalling_residual =
        std::max(rep.signalling_residual, a.total_for_setting(s).frobenius_distance(total0));
  }

  rep.psd_ok = rep.psd_violation <= tol;
  rep.normalization_ok = rep.normalization_residual <= tol;
  rep.signalling_ok = rep.signalling_residual <= tol;
  return rep;
}

Assemblage merge_untrusted(const Assemblage& a) {
  if (a.scenario.n_untrusted == 1) return a;
  Scenario sc;
  sc.n_untrusted = 1;
  sc.settings_per_untrusted = {a.scenario.joint_settings()};
  sc.outcomes_per_untrusted = {a.scenario.joint_outcomes()};
  sc.trusted_dim = a.scenario.trusted_dim;
  Assemblage out(sc, a.provenance);
  out.validated = a.validated;
  for (int s = 0; s < sc.joint_settings(); ++s)
    for (int o = 0; o < sc.joint_outcomes(); ++o) out.at_flat(o, s) = a.at_flat(o, s);
  return out;
}

}  // namespace steercert
