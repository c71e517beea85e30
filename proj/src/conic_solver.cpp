#include "steercert/conic_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace steercert::sdp::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

int svec_len(int dim) { return dim * (dim + 1) / 2; }

int svec_index(int dim, int i, int j) {
  if (i < j) std::swap(i, j);
  return j * dim - j * (j - 1) / 2 + (i - j);
}

void svec_pack(const Eigen::MatrixXd& mat, Eigen::Ref<Eigen::VectorXd> out) {
  const int d = static_cast<int>(mat.rows());
  int k = 0;
  for (int j = 0; j < d; ++j) {
    out[k++] = mat(j, j);
    for (int i = j + 1; i < d; ++i) out[k++] = kSqrt2 * mat(i, j);
  }
}

void svec_unpack(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::MatrixXd& mat) {
  const int d = static_cast<int>(mat.rows());
  int k = 0;
  for (int j = 0; j < d; ++j) {
    mat(j, j) = v[k++];
    for (int i = j + 1; i < d; ++i) {
      const double val = v[k++] / kSqrt2;
      mat(i, j) = val;
      mat(j, i) = val;
    }
  }
}

namespace {

// Nesterov-Todd scaling state for one cone block.
struct BlockScaling {
  const ConeBlock* blk = nullptr;

  // psd
  Eigen::MatrixXd R, Rinv, G;
  Eigen::VectorXd sigma;
  // soc: T = Q_w with w = eta*v, W = Q_u with u = w^{1/2}
  double eta = 1.0;
  Eigen::VectorXd v, u;
  // nonneg
  Eigen::VectorXd w;

  Eigen::VectorXd lambda;  // scaled point, block coordinates

  // scratch
  mutable Eigen::MatrixXd t1, t2, t3;

  bool compute(const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& s);

  void apply_T(const Eigen::Ref<const Eigen::VectorXd>& in,
               Eigen::Ref<Eigen::VectorXd> out) const;
  void apply_W(const Eigen::Ref<const Eigen::VectorXd>& in,
               Eigen::Ref<Eigen::VectorXd> out) const;
  void apply_Wt(const Eigen::Ref<const Eigen::VectorXd>& in,
                Eigen::Ref<Eigen::VectorXd> out) const;
  void apply_Winv(const Eigen::Ref<const Eigen::VectorXd>& in,
                  Eigen::Ref<Eigen::VectorXd> out) const;
  void apply_WinvT(const Eigen::Ref<const Eigen::VectorXd>& in,
                   Eigen::Ref<Eigen::VectorXd> out) const;
  void jordan(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b, Eigen::Ref<Eigen::VectorXd> out) const;
  void lambda_solve(const Eigen::Ref<const Eigen::VectorXd>& rhs,
                    Eigen::Ref<Eigen::VectorXd> out) const;
};

double jdot(const Eigen::Ref<const Eigen::VectorXd>& u,
            const Eigen::Ref<const Eigen::VectorXd>& w) {
  return u[0] * w[0] - u.tail(u.size() - 1).dot(w.tail(w.size() - 1));
}

bool BlockScaling::compute(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& s) {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      Eigen::MatrixXd X(d, d), S(d, d);
      svec_unpack(x, X);
      svec_unpack(s, S);
      // factor with an eigenvalue-clamped fallback so grazing contact with
      // the boundary does not abort the iteration
      auto chol_or_repair = [&](const Eigen::MatrixXd& M, Eigen::MatrixXd& L) {
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() == Eigen::Success) {
          L = llt.matrixL();
          return true;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        if (es.info() != Eigen::Success) return false;
        const double floor_ev = std::max(1e-14, 1e-14 * es.eigenvalues().cwiseAbs().maxCoeff());
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor_ev);
        Eigen::MatrixXd rep = es.eigenvectors() * ev.asDiagonal() *
                              es.eigenvectors().transpose();
        Eigen::LLT<Eigen::MatrixXd> llt2(rep);
        if (llt2.info() != Eigen::Success) return false;
        L = llt2.matrixL();
        return true;
      };
      Eigen::MatrixXd Lx, Ls;
      if (!chol_or_repair(X, Lx) || !chol_or_repair(S, Ls)) return false;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ls.transpose() * Lx,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      sigma = svd.singularValues();
      if (sigma.minCoeff() <= 0) return false;
      Eigen::VectorXd si = sigma.cwiseSqrt().cwiseInverse();
      R = Lx * svd.matrixV() * si.asDiagonal();
      Rinv = si.asDiagonal() * svd.matrixU().transpose() * Ls.transpose();
      G = R * R.transpose();
      lambda.resize(blk->len);
      Eigen::MatrixXd Lam = sigma.asDiagonal();
      svec_pack(Lam, lambda);
      return true;
    }
    case ConeBlock::Kind::soc: {
      const int k = blk->dim;
      const double jx = jdot(x, x), js = jdot(s, s);
      if (jx <= 0 || js <= 0 || x[0] <= 0 || s[0] <= 0) return false;
      const double ax = std::sqrt(jx), as = std::sqrt(js);
      const double gamma = std::sqrt((1.0 + x.dot(s) / (ax * as)) / 2.0);
      // scaling point w = eta * v satisfies Q_w s = x
      v.resize(k);
      v = x / ax;
      v[0] += s[0] / as;
      v.tail(k - 1) -= s.tail(k - 1) / as;
      v /= 2.0 * gamma;
      eta = std::sqrt(ax / as);
      // Jordan square root u of w, so that W = Q_u = Q_w^{1/2}
      u = eta * v;
      const double u0 = u[0] + eta;
      u[0] = u0;
      u /= std::sqrt(2.0 * u0);
      lambda.resize(k);
      apply_W(s, lambda);
      return true;
    }
    case ConeBlock::Kind::nonneg: {
      if ((x.array() <= 0).any() || (s.array() <= 0).any()) return false;
      w = (x.array() / s.array()).sqrt();
      lambda = (x.array() * s.array()).sqrt();
      return true;
    }
  }
  return false;
}

void BlockScaling::apply_T(const Eigen::Ref<const Eigen::VectorXd>& in,
                           Eigen::Ref<Eigen::VectorXd> out) const {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      t1.resize(d, d);
      svec_unpack(in, t1);
      t2.noalias() = G * t1;
      t3.noalias() = t2 * G;
      svec_pack(t3, out);
      return;
    }
    case ConeBlock::Kind::soc: {
      // T = Q_w = eta^2 (2 v v' - J)
      const int k = blk->dim;
      const double vu = v.dot(in);
      out = 2.0 * vu * v;
      out[0] -= in[0];
      out.tail(k - 1) += in.tail(k - 1);
      out *= eta * eta;
      return;
    }
    case ConeBlock::Kind::nonneg:
      out = in.array() * w.array().square();
      return;
  }
}

void BlockScaling::apply_W(const Eigen::Ref<const Eigen::VectorXd>& in,
                           Eigen::Ref<Eigen::VectorXd> out) const {
  if (blk->kind == ConeBlock::Kind::psd) {
    const int d = blk->dim;
    t1.resize(d, d);
    svec_unpack(in, t1);
    t2.noalias() = R.transpose() * t1;
    t3.noalias() = t2 * R;
    svec_pack(t3, out);
    return;
  }
  if (blk->kind == ConeBlock::Kind::soc) {
    // W = Q_u = 2 u u' - det(u) J with det(u) = eta
    const int k = blk->dim;
    const double uu = u.dot(in);
    out = 2.0 * uu * u;
    out[0] -= eta * in[0];
    out.tail(k - 1) += eta * in.tail(k - 1);
    return;
  }
  out = in.array() * w.array();
}

void BlockScaling::apply_Wt(const Eigen::Ref<const Eigen::VectorXd>& in,
                            Eigen::Ref<Eigen::VectorXd> out) const {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      t1.resize(d, d);
      svec_unpack(in, t1);
      t2.noalias() = R * t1;
      t3.noalias() = t2 * R.transpose();
      svec_pack(t3, out);
      return;
    }
    case ConeBlock::Kind::soc:
      apply_W(in, out);  // Q_u is symmetric
      return;
    case ConeBlock::Kind::nonneg:
      out = in.array() * w.array();
      return;
  }
}

void BlockScaling::apply_Winv(const Eigen::Ref<const Eigen::VectorXd>& in,
                              Eigen::Ref<Eigen::VectorXd> out) const {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      t1.resize(d, d);
      svec_unpack(in, t1);
      t2.noalias() = Rinv.transpose() * t1;
      t3.noalias() = t2 * Rinv;
      svec_pack(t3, out);
      return;
    }
    case ConeBlock::Kind::soc: {
      // W^{-1} = Q_{u^{-1}} with u^{-1} = J u / det(u)
      const int k = blk->dim;
      Eigen::VectorXd ju = u;
      ju.tail(k - 1) *= -1.0;
      const double d = ju.dot(in);
      out = (2.0 / (eta * eta)) * d * ju;
      out[0] -= in[0] / eta;
      out.tail(k - 1) += in.tail(k - 1) / eta;
      return;
    }
    case ConeBlock::Kind::nonneg:
      out = in.array() / w.array();
      return;
  }
}

void BlockScaling::apply_WinvT(const Eigen::Ref<const Eigen::VectorXd>& in,
                               Eigen::Ref<Eigen::VectorXd> out) const {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      t1.resize(d, d);
      svec_unpack(in, t1);
      t2.noalias() = Rinv * t1;
      t3.noalias() = t2 * Rinv.transpose();
      svec_pack(t3, out);
      return;
    }
    case ConeBlock::Kind::soc:
    case ConeBlock::Kind::nonneg:
      apply_Winv(in, out);  // symmetric scalings
      return;
  }
}

void BlockScaling::jordan(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b,
                          Eigen::Ref<Eigen::VectorXd> out) const {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      Eigen::MatrixXd A(d, d), B(d, d);
      svec_unpack(a, A);
      svec_unpack(b, B);
      t1.noalias() = A * B;
      t2 = 0.5 * (t1 + t1.transpose());
      svec_pack(t2, out);
      return;
    }
    case ConeBlock::Kind::soc: {
      const double dot = a.dot(b);
      out = a[0] * b + b[0] * a;
      out[0] = dot;
      return;
    }
    case ConeBlock::Kind::nonneg:
      out = a.array() * b.array();
      return;
  }
}

void BlockScaling::lambda_solve(const Eigen::Ref<const Eigen::VectorXd>& rhs,
                                Eigen::Ref<Eigen::VectorXd> out) const {
  switch (blk->kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk->dim;
      t1.resize(d, d);
      svec_unpack(rhs, t1);
      t2.resize(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t2(i, j) = 2.0 * t1(i, j) / (sigma[i] + sigma[j]);
      svec_pack(t2, out);
      return;
    }
    case ConeBlock::Kind::soc: {
      const int k = blk->dim;
      const double den = jdot(lambda, lambda);
      const double z0 =
          (lambda[0] * rhs[0] - lambda.tail(k - 1).dot(rhs.tail(k - 1))) / den;
      out[0] = z0;
      out.tail(k - 1) = (rhs.tail(k - 1) - z0 * lambda.tail(k - 1)) / lambda[0];
      return;
    }
    case ConeBlock::Kind::nonneg:
      out = rhs.array() / lambda.array();
      return;
  }
}

// Largest step alpha with u + alpha du still in the cone (capped outside).
double max_step(const ConeBlock& blk, const Eigen::Ref<const Eigen::VectorXd>& u,
                const Eigen::Ref<const Eigen::VectorXd>& du) {
  switch (blk.kind) {
    case ConeBlock::Kind::psd: {
      const int d = blk.dim;
      Eigen::MatrixXd U(d, d), D(d, d);
      svec_unpack(u, U);
      svec_unpack(du, D);
      Eigen::LLT<Eigen::MatrixXd> llt(U);
      if (llt.info() != Eigen::Success) {
        // grazing the boundary: generalized eigenvalue fallback
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
            D, U + 1e-14 * Eigen::MatrixXd::Identity(d, d));
        if (ges.info() != Eigen::Success) return 0.0;
        const double emin = ges.eigenvalues().minCoeff();
        return emin >= 0 ? kInf : -1.0 / emin;
      }
      Eigen::MatrixXd L = llt.matrixL();
      Eigen::MatrixXd Mid = L.triangularView<Eigen::Lower>().solve(D);
      Mid = L.triangularView<Eigen::Lower>().solve(Mid.transpose().eval());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Mid + Mid.transpose()),
                                                        Eigen::EigenvaluesOnly);
      const double emin = es.eigenvalues().minCoeff();
      return emin >= 0 ? kInf : -1.0 / emin;
    }
    case ConeBlock::Kind::soc: {
      const int k = blk.dim;
      // roots of jdot(u + a du) = 0 with u strictly interior
      const double c2 = jdot(du, du);
      const double c1 = 2.0 * (u[0] * du[0] - u.tail(k - 1).dot(du.tail(k - 1)));
      const double c0 = jdot(u, u);
      double alpha = kInf;
      if (std::abs(c2) < 1e-300) {
        if (c1 < 0) alpha = -c0 / c1;
      } else {
        const double disc = c1 * c1 - 4 * c2 * c0;
        if (disc >= 0) {
          const double sq = std::sqrt(disc);
          for (double r : {(-c1 - sq) / (2 * c2), (-c1 + sq) / (2 * c2)}) {
            if (r > 0) alpha = std::min(alpha, r);
          }
        }
      }
      if (du[0] < 0) alpha = std::min(alpha, -u[0] / du[0]);
      return alpha;
    }
    case ConeBlock::Kind::nonneg: {
      double alpha = kInf;
      for (int i = 0; i < blk.len; ++i) {
        if (du[i] < 0) alpha = std::min(alpha, -u[i] / du[i]);
      }
      return alpha;
    }
  }
  return 0.0;
}

void cone_identity(const ConeBlock& blk, Eigen::Ref<Eigen::VectorXd> out) {
  out.setZero();
  switch (blk.kind) {
    case ConeBlock::Kind::psd: {
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(blk.dim, blk.dim);
      svec_pack(I, out);
      return;
    }
    case ConeBlock::Kind::soc:
      out[0] = 1.0;
      return;
    case ConeBlock::Kind::nonneg:
      out.setOnes();
      return;
  }
}

struct Scaler {
  // applies per-block operators across the stacked vector
  const std::vector<ConeBlock>& blocks;
  std::vector<BlockScaling>& scal;

  template <typename F>
  void for_blocks(F&& f) const {
    for (size_t k = 0; k < blocks.size(); ++k) f(blocks[k], scal[k]);
  }

  bool compute(const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
    for (size_t k = 0; k < blocks.size(); ++k) {
      if (!scal[k].compute(x.segment(blocks[k].offset, blocks[k].len),
                           s.segment(blocks[k].offset, blocks[k].len)))
        return false;
    }
    return true;
  }

#define STEERCERT_BLOCKWISE(NAME)                                                       \
  void NAME(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {                    \
    out.resize(in.size());                                                              \
    for (size_t k = 0; k < blocks.size(); ++k)                                          \
      scal[k].NAME(in.segment(blocks[k].offset, blocks[k].len),                         \
                   out.segment(blocks[k].offset, blocks[k].len));                       \
  }
  STEERCERT_BLOCKWISE(apply_T)
  STEERCERT_BLOCKWISE(apply_W)
  STEERCERT_BLOCKWISE(apply_Wt)
  STEERCERT_BLOCKWISE(apply_Winv)
  STEERCERT_BLOCKWISE(apply_WinvT)
  STEERCERT_BLOCKWISE(lambda_solve)
#undef STEERCERT_BLOCKWISE

  void jordan(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& out) const {
    out.resize(a.size());
    for (size_t k = 0; k < blocks.size(); ++k)
      scal[k].jordan(a.segment(blocks[k].offset, blocks[k].len),
                     b.segment(blocks[k].offset, blocks[k].len),
                     out.segment(blocks[k].offset, blocks[k].len));
  }

  Eigen::VectorXd lambda_stacked(int n) const {
    Eigen::VectorXd out(n);
    for (size_t k = 0; k < blocks.size(); ++k)
      out.segment(blocks[k].offset, blocks[k].len) = scal[k].lambda;
    return out;
  }
};

double total_max_step(const std::vector<ConeBlock>& blocks, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& du) {
  double alpha = kInf;
  for (const auto& blk : blocks) {
    alpha = std::min(alpha, max_step(blk, u.segment(blk.offset, blk.len),
                                     du.segment(blk.offset, blk.len)));
  }
  return alpha;
}

}  // namespace

ConicSolution solve_conic(const ConicProblem& prob, const SolverOptions& opts) {
  ConicSolution sol;
  const int n = prob.n();
  const int m = prob.m();

  // Row and objective scaling; solutions are reported in original units.
  Eigen::VectorXd row_scale(m);
  Eigen::MatrixXd A = prob.A;
  Eigen::VectorXd b = prob.b;
  for (int i = 0; i < m; ++i) {
    row_scale[i] = std::max(1e-8, A.row(i).cwiseAbs().maxCoeff());
    A.row(i) /= row_scale[i];
    b[i] /= row_scale[i];
  }
  const double c_scale = std::max(1.0, prob.c.cwiseAbs().maxCoeff());
  Eigen::VectorXd c = prob.c / c_scale;

  double nu = 0;
  for (const auto& blk : prob.blocks) {
    switch (blk.kind) {
      case ConeBlock::Kind::psd: nu += blk.dim; break;
      case ConeBlock::Kind::soc: nu += 1; break;
      case ConeBlock::Kind::nonneg: nu += blk.len; break;
    }
  }

  Eigen::VectorXd e(n);
  for (const auto& blk : prob.blocks) cone_identity(blk, e.segment(blk.offset, blk.len));

  Eigen::VectorXd x = e, s = e, y = Eigen::VectorXd::Zero(m);

  std::vector<BlockScaling> scalings(prob.blocks.size());
  for (size_t k = 0; k < prob.blocks.size(); ++k) scalings[k].blk = &prob.blocks[k];
  Scaler W{prob.blocks, scalings};

  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + c.norm();

  auto finalize = [&](SolveStatus status, const std::string& msg, int it) {
    sol.status = status;
    sol.message = msg;
    sol.iterations = it;
    sol.x = x;
    sol.y = (y.array() / row_scale.array()).matrix() * c_scale;
    sol.s = s * c_scale;
    sol.pobj = prob.c.dot(x);
    sol.dobj = prob.b.dot(sol.y);
    sol.gap = x.dot(sol.s);
    sol.pres = (prob.A * x - prob.b).norm() / (1.0 + prob.b.norm());
    sol.dres = (prob.A.transpose() * sol.y + sol.s - prob.c).norm() / (1.0 + prob.c.norm());
    return sol;
  };

  int stall_count = 0;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Eigen::VectorXd rp = b - A * x;
    Eigen::VectorXd rd = c - A.transpose() * y - s;
    const double mu = x.dot(s) / nu;
    const double pobj = c.dot(x), dobj = b.dot(y);
    const double pres = rp.norm() / bnorm;
    const double dres = rd.norm() / cnorm;
    const double relgap = x.dot(s) / std::max(1.0, std::abs(pobj));
    const double valgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (opts.verbose) {
      std::ostringstream os;
      os << "iter " << iter << " pobj " << pobj << " dobj " << dobj << " gap " << x.dot(s)
         << " pres " << pres << " dres " << dres;
      // verbose diagnostics stay on stderr so machine output is unaffected
      fprintf(stderr, "%s\n", os.str().c_str());
    }

    if (pres <= opts.feasibility_tolerance && dres <= opts.feasibility_tolerance &&
        relgap <= opts.gap_tolerance && valgap <= opts.gap_tolerance) {
      return finalize(SolveStatus::optimal, "converged", iter);
    }
    if (!x.allFinite() || !s.allFinite() || !y.allFinite()) {
      return finalize(SolveStatus::numerical_failure, "iterates diverged (nan/inf)", iter);
    }
    if (std::abs(pobj) > 1e13 && pres <= 1e-6) {
      return finalize(SolveStatus::unbounded, "primal objective diverging", iter);
    }
    if (std::abs(dobj) > 1e13 && dres <= 1e-6) {
      return finalize(SolveStatus::infeasible, "dual objective diverging", iter);
    }

    if (!W.compute(x, s)) {
      return finalize(SolveStatus::numerical_failure, "scaling breakdown (iterate left cone)",
                      iter);
    }
    Eigen::VectorXd lambda = W.lambda_stacked(n);

    // Normal matrix M = A T A' with T = W'W.
    Eigen::MatrixXd TA(m, n);
    {
      Eigen::VectorXd tmp(n);
      for (int i = 0; i < m; ++i) {
        Eigen::VectorXd row = A.row(i);
        W.apply_T(row, tmp);
        TA.row(i) = tmp;
      }
    }
    Eigen::MatrixXd M(m, m);
    M.noalias() = A * TA.transpose();

    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    double ridge = 0.0;
    for (int attempt = 0;; ++attempt) {
      Eigen::MatrixXd Mreg = M;
      if (ridge > 0) Mreg.diagonal().array() += ridge;
      ldlt.compute(Mreg);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) break;
      if (attempt >= 4) {
        return finalize(SolveStatus::numerical_failure, "normal matrix factorization failed",
                        iter);
      }
      ridge = ridge == 0.0 ? 1e-12 * (1.0 + M.trace() / m) : ridge * 1000.0;
    }
    auto solve_M = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd dy = ldlt.solve(rhs);
      dy += ldlt.solve(rhs - M * dy);  // one round of refinement
      return dy;
    };

    auto directions = [&](const Eigen::VectorXd& rhs3, Eigen::VectorXd& dx, Eigen::VectorXd& dy,
                          Eigen::VectorXd& ds) {
      Eigen::VectorXd g(n), trd(n), wg(n);
      W.lambda_solve(rhs3, g);
      W.apply_T(rd, trd);
      W.apply_Wt(g, wg);
      dy = solve_M(rp + A * (trd - wg));
      Eigen::VectorXd aty = A.transpose() * dy;
      Eigen::VectorXd t(n);
      W.apply_T(aty, t);
      dx = t - trd + wg;
      ds = rd - aty;
    };

    // Affine (predictor) direction.
    Eigen::VectorXd rhs3(n), lam2(n);
    W.jordan(lambda, lambda, lam2);
    rhs3 = -lam2;
    Eigen::VectorXd dx_a(n), dy_a(m), ds_a(n);
    directions(rhs3, dx_a, dy_a, ds_a);

    const double ax_a = std::min(1.0, total_max_step(prob.blocks, x, dx_a));
    const double as_a = std::min(1.0, total_max_step(prob.blocks, s, ds_a));
    const double alpha_a = std::min(ax_a, as_a);
    const double mu_aff = (x + alpha_a * dx_a).dot(s + alpha_a * ds_a) / nu;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::min(1.0, sigma);

    // Combined (corrector) direction.
    Eigen::VectorXd dxw(n), dsw(n), corr(n);
    W.apply_WinvT(dx_a, dxw);
    W.apply_W(ds_a, dsw);
    W.jordan(dxw, dsw, corr);
    rhs3 = -lam2 - corr + sigma * mu * e;
    Eigen::VectorXd dx(n), dy(m), ds(n);
    directions(rhs3, dx, dy, ds);

    const double ax = total_max_step(prob.blocks, x, dx);
    const double as = total_max_step(prob.blocks, s, ds);
    const double alpha = std::min(1.0, 0.99 * std::min(ax, as));

    if (alpha < 1e-8) {
      if (++stall_count >= 3) {
        return finalize(SolveStatus::numerical_failure, "step length collapsed", iter);
      }
    } else {
      stall_count = 0;
    }

    x += alpha * dx;
    y += alpha * dy;
    s += alpha * ds;
  }

  return finalize(SolveStatus::numerical_failure, "iteration limit reached", opts.max_iterations);
}

}  // namespace steercert::sdp::detail
