#pragma once

#include <string>
#include <vector>

#include "steercert/assemblage.hpp"
#include "steercert/sdp.hpp"

namespace steercert {

enum class CertTask { bipartite_reduction, full_ent_1unt, full_ent_2unt, gme_1unt, gme_2unt };

std::string to_string(CertTask t);
CertTask cert_task_from_string(const std::string& s);

/// NPA-style relaxation level for the two-untrusted GME test: words
/// {1, A_x, B_y} (level 1) or additionally the products A_x B_y ("1+AB").
enum class NpaLevel { one, one_plus_ab };

struct CertOptions {
  sdp::SolverOptions solver;
  /// Trusted factor the partial transpose acts on in PPT constraints
  /// (0 = first trusted qubit, 1 = second; equivalent tests for qubits).
  int ppt_system = 0;
  NpaLevel npa_level = NpaLevel::one_plus_ab;
};

/// Linear functional on assemblages: value = sum Tr[F_{o|s} sigma_{o|s}].
/// Positive evaluation certifies the task's entanglement class; applied to
/// the generating assemblage it reproduces the robustness.
struct Witness {
  CertTask task = CertTask::bipartite_reduction;
  Scenario scenario;
  std::vector<HermitianMatrix> entries;  // flat layout matching Assemblage

  const HermitianMatrix& at(const std::vector<int>& outcomes,
                            const std::vector<int>& settings) const;
};

struct CertResult {
  CertTask task = CertTask::bipartite_reduction;
  double robustness = 0.0;  // r*, clamped to 0 when within noise of zero
  double robustness_raw = 0.0;
  bool certified = false;  // r* above the numerical certification floor
  Witness witness;
  sdp::SolveStatus status = sdp::SolveStatus::numerical_failure;
  double duality_gap = 0.0;
  int iterations = 0;
  std::string message;
};

/// Random-noise robustness of steering for one untrusted party and a single
/// trusted qubit; r* > 0 certifies entanglement of the underlying bipartite
/// state.
CertResult bipartite_lhs_robustness(const Assemblage& a, const CertOptions& opts = {});

/// Full-separability test, one untrusted party, trusted pair of qubits, with
/// the separability of the trusted pair relaxed to PPT membership.
CertResult full_separability_1unt(const Assemblage& a, const CertOptions& opts = {});

/// Full-separability test with two untrusted parties.
CertResult full_separability_2unt(const Assemblage& a, const CertOptions& opts = {});

/// Genuine multipartite entanglement test, one untrusted party.
CertResult gme_1unt(const Assemblage& a, const CertOptions& opts = {});

/// Genuine multipartite entanglement test, two untrusted parties, with the
/// quantum bipartition term relaxed through a moment matrix at the requested
/// level.
CertResult gme_2unt(const Assemblage& a, const CertOptions& opts = {});

CertResult certify(CertTask task, const Assemblage& a, const CertOptions& opts = {});

double apply_witness(const Witness& w, const Assemblage& a);

}  // namespace steercert
