#pragma once

#include <string>
#include <vector>

#include "steercert/qmath.hpp"

namespace steercert {

/// Measurement network layout: how many parties hold uncharacterized devices
/// and the dimension of the trusted remainder.
struct Scenario {
  int n_untrusted = 1;
  std::vector<int> settings_per_untrusted = {3};
  std::vector<int> outcomes_per_untrusted = {2};
  int trusted_dim = 2;

  static Scenario one_untrusted(int trusted_dim = 2, int settings = 3, int outcomes = 2);
  static Scenario two_untrusted(int trusted_dim = 2, int settings = 3, int outcomes = 2);

  void validate() const;

  int joint_settings() const;
  int joint_outcomes() const;

  /// Flat index of a setting tuple (lexicographic, first party major).
  int setting_index(const std::vector<int>& settings) const;
  int outcome_index(const std::vector<int>& outcomes) const;
  std::vector<int> setting_tuple(int index) const;
  std::vector<int> outcome_tuple(int index) const;

  bool operator==(const Scenario& o) const = default;
};

/// Collection of unnormalized conditional states left on the trusted side,
/// one per (outcome tuple, setting tuple). Members are stored in a fixed
/// lexicographic order (settings major, outcomes minor) so downstream
/// constraint ordering is reproducible; accessors address them by tuple.
struct Assemblage {
  Scenario scenario;
  bool validated = false;
  std::string provenance;
  std::vector<HermitianMatrix> members;

  Assemblage() = default;
  explicit Assemblage(Scenario sc, std::string prov = "");

  const HermitianMatrix& at(const std::vector<int>& outcomes,
                            const std::vector<int>& settings) const;
  HermitianMatrix& at(const std::vector<int>& outcomes, const std::vector<int>& settings);
  const HermitianMatrix& at_flat(int outcome_index, int setting_index) const;
  HermitianMatrix& at_flat(int outcome_index, int setting_index);

  /// Sum over outcomes for one setting tuple (the trusted-side reduction
  /// conditioned on nothing when non-signalling holds).
  HermitianMatrix total_for_setting(int setting_index) const;
};

/// Per-invariant residuals measured on an assemblage; reporting only, no
/// construction-time enforcement so experimental data can be represented.
struct ValidationReport {
  double psd_violation = 0.0;            // max over members of max(0, -min eigenvalue)
  double normalization_residual = 0.0;   // max |sum_a Tr(sigma_a|x) - 1|
  double signalling_residual = 0.0;      // max Frobenius mismatch of reduced members
  double tolerance = 0.0;
  bool psd_ok = false;
  bool normalization_ok = false;
  bool signalling_ok = false;

  bool all_ok() const { return psd_ok && normalization_ok && signalling_ok; }
  std::string summary() const;
};

/// sigma_{a|x} = Tr_untrusted[(M_{a|x} (x) 1_trusted) rho]. `dims` are the
/// subsystem dimensions of rho left to right; `untrusted_subsystem` indexes
/// the factor measured by the uncharacterized device. The trusted factors
/// keep their relative order.
Assemblage build_one_untrusted(const HermitianMatrix& rho, const std::vector<Povm>& povms,
                               int untrusted_subsystem, const std::vector<int>& dims);

/// sigma_{ab|xy} = Tr_AB[(M_{a|x} (x) M_{b|y} (x) 1_C) rho] on a three-qubit
/// rho ordered A (x) B (x) C.
Assemblage build_two_untrusted(const HermitianMatrix& rho, const std::vector<Povm>& povms_a,
                               const std::vector<Povm>& povms_b);

/// Every member = I / (trusted_dim * number of joint outcomes); the inert
/// noise assemblage all robustness programs mix toward.
Assemblage maximally_mixed_assemblage(const Scenario& scenario);

/// Reduce a one-untrusted assemblage on two trusted qubits to a single
/// trusted qubit by tracing out factor `drop` (0 = first, 1 = second).
Assemblage trace_out_trusted_subsystem(const Assemblage& asm_bc, int drop);

ValidationReport validate(const Assemblage& a, double tol = 1e-9);

/// Merge a two-untrusted assemblage into an equivalent one-untrusted view:
/// the pair of boxes becomes a single box with joint settings and outcomes.
Assemblage merge_untrusted(const Assemblage& a);

}  // namespace steercert
