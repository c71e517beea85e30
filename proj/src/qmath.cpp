#include "steercert/qmath.hpp"

#include <cmath>

namespace steercert {

HermitianMatrix::HermitianMatrix(Cmat m, double tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double asym = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw std::invalid_argument("HermitianMatrix: hermiticity violation " +
                                std::to_string(asym) + " exceeds tolerance " +
                                std::to_string(tol));
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(m_ * s); }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(Cmat::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(int dim) { return HermitianMatrix(Cmat::Zero(dim, dim)); }

Eigen::VectorXd HermitianMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Cmat> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

bool HermitianMatrix::is_psd(double tol) const { return min_eigenvalue() >= -tol; }

double HermitianMatrix::frobenius_distance(const HermitianMatrix& o) const {
  return (m_ - o.m_).norm();
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.mat() * b.mat()).trace().real();
}

Pauli pauli_from_label(const std::string& label) {
  if (label == "X" || label == "x") return Pauli::X;
  if (label == "Y" || label == "y") return Pauli::Y;
  if (label == "Z" || label == "z") return Pauli::Z;
  throw std::invalid_argument("unknown Pauli label '" + label + "' (expected X, Y or Z)");
}

std::string pauli_label(Pauli p) {
  switch (p) {
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  throw std::logic_error("invalid Pauli enum");
}

HermitianMatrix pauli_matrix(Pauli p) {
  Cmat m(2, 2);
  const Complex i(0.0, 1.0);
  switch (p) {
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return HermitianMatrix(std::move(m));
}

void Povm::validate(double tol) const {
  if (elements.empty()) throw std::invalid_argument("Povm: no elements");
  const int d = dim();
  Cmat sum = Cmat::Zero(d, d);
  for (const auto& e : elements) {
    if (e.dim() != d) throw std::invalid_argument("Povm: inconsistent element dimensions");
    if (!e.is_psd(tol)) {
      throw std::invalid_argument("Povm: element not positive semidefinite (min eigenvalue " +
                                  std::to_string(e.min_eigenvalue()) + ")");
    }
    sum += e.mat();
  }
  if ((sum - Cmat::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("Povm: elements do not sum to identity");
  }
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int da = a.dim(), db = b.dim();
  if (da < 1 || db < 1) throw std::invalid_argument("kron: dimensions must be >= 1");
  Cmat out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.mat()(i, j) * b.mat();
  return HermitianMatrix(std::move(out));
}

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

// Row-major multi-index decode for tensor factor dimensions.
void decode(int index, const std::vector<int>& dims, std::vector<int>& out) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

}  // namespace

HermitianMatrix partial_trace(const HermitianMatrix& m, const std::vector<int>& dims,
                              const std::vector<int>& keep) {
  if (product(dims) != m.dim()) {
    throw std::invalid_argument("partial_trace: product of dims does not match matrix dimension");
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be non-empty");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: keep index out of range");
    kept[k] = true;
  }

  std::vector<int> keep_dims, trace_dims, keep_idx, trace_idx;
  for (int k = 0; k < n; ++k) {
    if (kept[k]) {
      keep_dims.push_back(dims[k]);
      keep_idx.push_back(k);
    } else {
      trace_dims.push_back(dims[k]);
      trace_idx.push_back(k);
    }
  }
  const int dk = product(keep_dims);
  const int dt = product(trace_dims);

  Cmat out = Cmat::Zero(dk, dk);
  std::vector<int> row(n), col(n), ki(keep_idx.size()), kj(keep_idx.size()),
      ti(std::max<size_t>(trace_idx.size(), 1));
  for (int i = 0; i < dk; ++i) {
    decode(i, keep_dims, ki);
    for (int j = 0; j < dk; ++j) {
      decode(j, keep_dims, kj);
      Complex acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        if (!trace_dims.empty()) decode(t, trace_dims, ti);
        for (size_t k = 0; k < keep_idx.size(); ++k) {
          row[keep_idx[k]] = ki[k];
          col[keep_idx[k]] = kj[k];
        }
        for (size_t k = 0; k < trace_idx.size(); ++k) {
          row[trace_idx[k]] = ti[k];
          col[trace_idx[k]] = ti[k];
        }
        int r = 0, c = 0;
        for (int k = 0; k < n; ++k) {
          r = r * dims[k] + row[k];
          c = c * dims[k] + col[k];
        }
        acc += m.mat()(r, c);
      }
      out(i, j) = acc;
    }
  }
  return HermitianMatrix(std::move(out), 1e-9);
}

HermitianMatrix partial_transpose(const HermitianMatrix& m, const std::vector<int>& dims,
                                  int sys) {
  if (dims.size() != 2 || dims[0] * dims[1] != m.dim()) {
    throw std::invalid_argument("partial_transpose: dims must be a bipartition of the matrix");
  }
  if (sys != 0 && sys != 1) throw std::invalid_argument("partial_transpose: sys must be 0 or 1");
  const int d0 = dims[0], d1 = dims[1];
  Cmat out(m.dim(), m.dim());
  for (int i0 = 0; i0 < d0; ++i0)
    for (int i1 = 0; i1 < d1; ++i1)
      for (int j0 = 0; j0 < d0; ++j0)
        for (int j1 = 0; j1 < d1; ++j1) {
          const int r = i0 * d1 + i1, c = j0 * d1 + j1;
          const int rt = (sys == 0 ? j0 : i0) * d1 + (sys == 1 ? j1 : i1);
          const int ct = (sys == 0 ? i0 : j0) * d1 + (sys == 1 ? i1 : j1);
          out(rt, ct) = m.mat()(r, c);
        }
  return HermitianMatrix(std::move(out), 1e-9);
}

Povm pauli_povm(Pauli basis) {
  const HermitianMatrix p = pauli_matrix(basis);
  const HermitianMatrix id = HermitianMatrix::identity(2);
  Povm povm;
  povm.elements.push_back((id + p) * 0.5);
  povm.elements.push_back((id - p) * 0.5);
  return povm;
}

std::vector<Povm> pauli_xyz() {
  return {pauli_povm(Pauli::X), pauli_povm(Pauli::Y), pauli_povm(Pauli::Z)};
}

HermitianMatrix w_state() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  const double a = 1.0 / std::sqrt(3.0);
  v(1) = a;  // |001>
  v(2) = a;  // |010>
  v(4) = a;  // |100>
  return HermitianMatrix(v * v.adjoint());
}

HermitianMatrix ghz_state() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  const double a = 1.0 / std::sqrt(2.0);
  v(0) = a;
  v(7) = a;
  return HermitianMatrix(v * v.adjoint());
}

HermitianMatrix psi_plus_state() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  const double a = 1.0 / std::sqrt(2.0);
  v(1) = a;  // |01>
  v(2) = a;  // |10>
  return HermitianMatrix(v * v.adjoint());
}

HermitianMatrix maximally_mixed(int dim) {
  return HermitianMatrix(Cmat::Identity(dim, dim) / static_cast<double>(dim));
}

HermitianMatrix white_noise_mix(const HermitianMatrix& rho, double visibility) {
  const int d = rho.dim();
  return HermitianMatrix(visibility * rho.mat() +
                         (1.0 - visibility) * Cmat::Identity(d, d) / static_cast<double>(d));
}

StateMetrics state_metrics(const HermitianMatrix& rho, const HermitianMatrix& target) {
  if (rho.dim() != target.dim()) {
    throw std::invalid_argument("state_metrics: dimension mismatch");
  }
  if (!rho.is_psd(1e-8) || !target.is_psd(1e-8)) {
    throw std::invalid_argument("state_metrics: input not positive semidefinite");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-8 || std::abs(target.trace() - 1.0) > 1e-8) {
    throw std::invalid_argument("state_metrics: inputs must have unit trace");
  }
  StateMetrics out;
  out.purity = (rho.mat() * rho.mat()).trace().real();
  out.fidelity = (rho.mat() * target.mat()).trace().real();
  return out;
}

}  // namespace steercert
