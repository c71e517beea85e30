#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace steercert {

using Complex = std::complex<double>;
using Cmat = Eigen::MatrixXcd;

// Tolerances used when constructing vs. ingesting matrices: exact
// constructions must be Hermitian to near machine precision, experimental
// data gets slack for measurement noise.
constexpr double kHermTolConstructed = 1e-12;
constexpr double kHermTolIngested = 1e-8;
constexpr double kPsdTol = 1e-10;

/// Dense complex square matrix asserted Hermitian at construction.
/// After validation the stored matrix is exactly hermitized, so eigensolvers
/// downstream never see asymmetric input.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Cmat m, double tol = kHermTolConstructed);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Cmat& mat() const { return m_; }

  double trace() const { return m_.trace().real(); }
  Complex operator()(int i, int j) const { return m_(i, j); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix& operator+=(const HermitianMatrix& o);

  static HermitianMatrix identity(int dim);
  static HermitianMatrix zero(int dim);

  /// Eigenvalues in ascending order.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  bool is_psd(double tol = kPsdTol) const;

  /// Frobenius distance to another matrix of the same dimension.
  double frobenius_distance(const HermitianMatrix& o) const;

 private:
  Cmat m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& m) { return m * s; }

/// Real part of Tr[a b]; both Hermitian so the trace itself is real.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

enum class Pauli { X, Y, Z };

Pauli pauli_from_label(const std::string& label);
std::string pauli_label(Pauli p);
HermitianMatrix pauli_matrix(Pauli p);

/// Positive-operator-valued measure: one element per outcome, elements sum
/// to the identity.
struct Povm {
  std::vector<HermitianMatrix> elements;

  int dim() const { return elements.empty() ? 0 : elements.front().dim(); }
  int outcomes() const { return static_cast<int>(elements.size()); }
  void validate(double tol = kPsdTol) const;
};

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Trace out the subsystems not listed in `keep`. `dims` are the tensor
/// factor dimensions left to right; `keep` uses 0-based indices and the kept
/// factors retain their original order.
HermitianMatrix partial_trace(const HermitianMatrix& m, const std::vector<int>& dims,
                              const std::vector<int>& keep);

/// Partial transpose on factor `sys` (0 or 1) of a bipartite space dB x dC.
HermitianMatrix partial_transpose(const HermitianMatrix& m, const std::vector<int>& dims,
                                  int sys);

/// Two-outcome projective measurement of a Pauli observable; outcome 0 is
/// the +1 eigenspace.
Povm pauli_povm(Pauli basis);

/// The three Pauli POVMs in X, Y, Z order (the default measurement set).
std::vector<Povm> pauli_xyz();

HermitianMatrix w_state();
HermitianMatrix ghz_state();
HermitianMatrix psi_plus_state();
HermitianMatrix maximally_mixed(int dim);

/// v * rho + (1 - v) * I/d.
HermitianMatrix white_noise_mix(const HermitianMatrix& rho, double visibility);

struct StateMetrics {
  double purity = 0.0;
  double fidelity = 0.0;
};

/// Purity Tr[rho^2] and fidelity <psi|rho|psi> against a pure target.
StateMetrics state_metrics(const HermitianMatrix& rho, const HermitianMatrix& target);

}  // namespace steercert
