#include <cmath>
#include <ostream>
#include <sstream>

#include "steercert/conic_solver.hpp"
#include "steercert/sdp.hpp"

namespace steercert::sdp {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

MatrixExpr& MatrixExpr::add(double coeff, VarId v) {
  terms_.push_back(Plain{coeff, v});
  return *this;
}

MatrixExpr& MatrixExpr::add_partial_transpose(double coeff, VarId v, std::vector<int> dims,
                                              int sys) {
  terms_.push_back(PartialTranspose{coeff, v, std::move(dims), sys});
  return *this;
}

MatrixExpr& MatrixExpr::add_partial_trace(double coeff, VarId v, std::vector<int> dims,
                                          std::vector<int> keep) {
  terms_.push_back(PartialTrace{coeff, v, std::move(dims), std::move(keep)});
  return *this;
}

MatrixExpr& MatrixExpr::add_scalar_times(VarId scalar_var, HermitianMatrix coeff) {
  terms_.push_back(ScalarTimes{scalar_var, std::move(coeff)});
  return *this;
}

MatrixExpr& MatrixExpr::add_block(double coeff, VarId big, int row0, int col0) {
  terms_.push_back(Block{coeff, big, row0, col0, false});
  return *this;
}

MatrixExpr& MatrixExpr::add_block_adjoint(double coeff, VarId big, int row0, int col0) {
  terms_.push_back(Block{coeff, big, row0, col0, true});
  return *this;
}

MatrixExpr& MatrixExpr::add_block_partial_trace(double coeff, VarId big, int row0, int col0,
                                                std::vector<int> dims, std::vector<int> keep) {
  terms_.push_back(BlockPartialTrace{coeff, big, row0, col0, std::move(dims), std::move(keep)});
  return *this;
}

MatrixExpr& MatrixExpr::add_block_partial_transpose(double coeff, VarId big, int row0, int col0,
                                                    std::vector<int> dims, int sys) {
  terms_.push_back(BlockPartialTranspose{coeff, big, row0, col0, std::move(dims), sys});
  return *this;
}

MatrixExpr& MatrixExpr::add_block_conditional_trace(double coeff, VarId big, int row0, int col0,
                                                    int kept_factor, int kept_dim,
                                                    const HermitianMatrix& k) {
  terms_.push_back(BlockConditionalTrace{coeff, big, row0, col0, kept_factor, kept_dim, k});
  return *this;
}

MatrixExpr& MatrixExpr::add_sandwich(double coeff, VarId v, Cmat l) {
  terms_.push_back(Sandwich{coeff, v, std::move(l)});
  return *this;
}

ScalarExpr& ScalarExpr::add_trace(double coeff, VarId v) {
  entries_.push_back(Entry{Complex(coeff, 0.0), v, -1, -1});  // -1 marks plain trace
  return *this;
}

ScalarExpr& ScalarExpr::add_trace(double coeff, VarId v, HermitianMatrix k) {
  // Tr[K X] = sum_ij K_ij X_ji: record entry functionals against X.
  const int d = k.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Complex c = coeff * k(i, j);
      if (std::abs(c) > 0) entries_.push_back(Entry{c, v, j, i});
    }
  return *this;
}

ScalarExpr& ScalarExpr::add_entry(Complex coeff, VarId v, int i, int j) {
  entries_.push_back(Entry{coeff, v, i, j});
  return *this;
}

ScalarExpr& ScalarExpr::add_component(double coeff, VarId v, int comp) {
  components_.push_back(Component{coeff, v, comp});
  return *this;
}

VarId SdpProblem::add_hermitian_var(const std::string& name, int dim, bool must_be_psd) {
  if (dim < 1) throw std::invalid_argument("add_hermitian_var: dim must be >= 1");
  vars_.push_back(VarDecl{name, dim, must_be_psd, false});
  return static_cast<VarId>(vars_.size()) - 1;
}

VarId SdpProblem::add_soc_var(const std::string& name, int dim) {
  if (dim < 2) throw std::invalid_argument("add_soc_var: dim must be >= 2");
  vars_.push_back(VarDecl{name, dim, false, true});
  return static_cast<VarId>(vars_.size()) - 1;
}

std::vector<SdpProblem::Nonzero> SdpProblem::entry_functional(const MatrixExpr& lhs, int p,
                                                              int q) const {
  std::vector<Nonzero> out;
  for (const auto& term : lhs.terms_) {
    if (const auto* t = std::get_if<MatrixExpr::Plain>(&term)) {
      out.push_back(Nonzero{t->v, p, q, Complex(t->c, 0)});
    } else if (const auto* t = std::get_if<MatrixExpr::PartialTranspose>(&term)) {
      const int nf = static_cast<int>(t->dims.size());
      std::vector<int> pi(nf), qi(nf);
      int pp = p, qq = q;
      for (int k = nf - 1; k >= 0; --k) {
        pi[k] = pp % t->dims[k];
        pp /= t->dims[k];
        qi[k] = qq % t->dims[k];
        qq /= t->dims[k];
      }
      std::swap(pi[t->sys], qi[t->sys]);
      int i = 0, j = 0;
      for (int k = 0; k < nf; ++k) {
        i = i * t->dims[k] + pi[k];
        j = j * t->dims[k] + qi[k];
      }
      out.push_back(Nonzero{t->v, i, j, Complex(t->c, 0)});
    } else if (const auto* t = std::get_if<MatrixExpr::PartialTrace>(&term)) {
      // entry (p,q) of the trace-out: sum over the dropped indices
      const int nfac = static_cast<int>(t->dims.size());
      std::vector<bool> kept(nfac, false);
      for (int k : t->keep) kept[k] = true;
      std::vector<int> keep_dims, drop_dims, keep_idx, drop_idx;
      for (int k = 0; k < nfac; ++k) {
        (kept[k] ? keep_dims : drop_dims).push_back(t->dims[k]);
        (kept[k] ? keep_idx : drop_idx).push_back(k);
      }
      int dt = 1;
      for (int d : drop_dims) dt *= d;
      std::vector<int> pi(keep_idx.size()), qi(keep_idx.size()), ti(drop_idx.size());
      auto decode = [](int index, const std::vector<int>& dims, std::vector<int>& outv) {
        for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
          outv[k] = index % dims[k];
          index /= dims[k];
        }
      };
      decode(p, keep_dims, pi);
      decode(q, keep_dims, qi);
      std::vector<int> row(nfac), col(nfac);
      for (int tt = 0; tt < dt; ++tt) {
        if (!drop_idx.empty()) decode(tt, drop_dims, ti);
        for (size_t k = 0; k < keep_idx.size(); ++k) {
          row[keep_idx[k]] = pi[k];
          col[keep_idx[k]] = qi[k];
        }
        for (size_t k = 0; k < drop_idx.size(); ++k) {
          row[drop_idx[k]] = ti[k];
          col[drop_idx[k]] = ti[k];
        }
        int i = 0, j = 0;
        for (int k = 0; k < nfac; ++k) {
          i = i * t->dims[k] + row[k];
          j = j * t->dims[k] + col[k];
        }
        out.push_back(Nonzero{t->v, i, j, Complex(t->c, 0)});
      }
    } else if (const auto* t = std::get_if<MatrixExpr::ScalarTimes>(&term)) {
      const Complex c = t->coeff(p, q);
      if (std::abs(c) > 0) out.push_back(Nonzero{t->v, 0, 0, c});
    } else if (const auto* t = std::get_if<MatrixExpr::BlockPartialTrace>(&term)) {
      const int nfac = static_cast<int>(t->dims.size());
      std::vector<bool> kept(nfac, false);
      for (int k : t->keep) kept[k] = true;
      std::vector<int> keep_dims, drop_dims, keep_idx, drop_idx;
      for (int k = 0; k < nfac; ++k) {
        (kept[k] ? keep_dims : drop_dims).push_back(t->dims[k]);
        (kept[k] ? keep_idx : drop_idx).push_back(k);
      }
      int dt = 1;
      for (int dd : drop_dims) dt *= dd;
      auto decode = [](int index, const std::vector<int>& dims_, std::vector<int>& outv) {
        for (int k = static_cast<int>(dims_.size()) - 1; k >= 0; --k) {
          outv[k] = index % dims_[k];
          index /= dims_[k];
        }
      };
      std::vector<int> pi(keep_idx.size()), qi(keep_idx.size()), ti(drop_idx.size());
      decode(p, keep_dims, pi);
      decode(q, keep_dims, qi);
      std::vector<int> row(nfac), col(nfac);
      for (int tt = 0; tt < dt; ++tt) {
        if (!drop_idx.empty()) decode(tt, drop_dims, ti);
        for (size_t k = 0; k < keep_idx.size(); ++k) {
          row[keep_idx[k]] = pi[k];
          col[keep_idx[k]] = qi[k];
        }
        for (size_t k = 0; k < drop_idx.size(); ++k) {
          row[drop_idx[k]] = ti[k];
          col[drop_idx[k]] = ti[k];
        }
        int i = 0, j = 0;
        for (int k = 0; k < nfac; ++k) {
          i = i * t->dims[k] + row[k];
          j = j * t->dims[k] + col[k];
        }
        out.push_back(Nonzero{t->v, t->row0 + i, t->col0 + j, Complex(t->c, 0)});
      }
    } else if (const auto* t = std::get_if<MatrixExpr::BlockPartialTranspose>(&term)) {
      const int nf = static_cast<int>(t->dims.size());
      std::vector<int> pi(nf), qi(nf);
      int pp = p, qq = q;
      for (int k = nf - 1; k >= 0; --k) {
        pi[k] = pp % t->dims[k];
        pp /= t->dims[k];
        qi[k] = qq % t->dims[k];
        qq /= t->dims[k];
      }
      std::swap(pi[t->sys], qi[t->sys]);
      int i = 0, j = 0;
      for (int k = 0; k < nf; ++k) {
        i = i * t->dims[k] + pi[k];
        j = j * t->dims[k] + qi[k];
      }
      out.push_back(Nonzero{t->v, t->row0 + i, t->col0 + j, Complex(t->c, 0)});
    } else if (const auto* t = std::get_if<MatrixExpr::BlockConditionalTrace>(&term)) {
      // kept first:  [Tr_2((1 (x) K) X)]_{pq} = sum_{s,t} K_{ts} X_{(p,s),(q,t)}
      // kept second: [Tr_1((K (x) 1) X)]_{pq} = sum_{s,t} K_{ts} X_{(s,p),(t,q)}
      const int dk = t->k.dim();
      for (int ss = 0; ss < dk; ++ss)
        for (int tt = 0; tt < dk; ++tt) {
          const Complex c = t->c * t->k(tt, ss);
          if (std::abs(c) == 0.0) continue;
          const int i = t->kept_factor == 0 ? p * dk + ss : ss * t->kept_dim + p;
          const int j = t->kept_factor == 0 ? q * dk + tt : tt * t->kept_dim + q;
          out.push_back(Nonzero{t->v, t->row0 + i, t->col0 + j, c});
        }
    } else if (const auto* t = std::get_if<MatrixExpr::Sandwich>(&term)) {
      // [L X L^dag]_{pq} = sum_{ij} L_{pi} conj(L_{qj}) X_{ij}
      const int k = static_cast<int>(t->l.cols());
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const Complex c = t->c * t->l(p, i) * std::conj(t->l(q, j));
          if (std::abs(c) == 0.0) continue;
          out.push_back(Nonzero{t->v, i, j, c});
        }
    } else if (const auto* t = std::get_if<MatrixExpr::Block>(&term)) {
      if (t->transposed) {
        // adjoint of a sub-block of a Hermitian host: conj of entry
        // (row0+q, col0+p), which equals entry (col0+p, row0+q)
        out.push_back(Nonzero{t->v, t->col0 + p, t->row0 + q, Complex(t->c, 0)});
      } else {
        out.push_back(Nonzero{t->v, t->row0 + p, t->col0 + q, Complex(t->c, 0)});
      }
    }
  }
  return out;
}

void SdpProblem::expand_matrix_equality(const MatrixExpr& lhs, const Cmat& rhs,
                                        const std::string& tag, bool hermitian_valued) {
  if (tag_info_.count(tag)) throw std::invalid_argument("duplicate constraint tag " + tag);
  const int d = lhs.dim();
  if (rhs.rows() != d || rhs.cols() != d) {
    throw std::invalid_argument("constraint " + tag + ": rhs dimension mismatch");
  }
  tag_info_[tag] = {d, hermitian_valued};
  tag_order_.push_back(tag);
  for (int p = 0; p < d; ++p) {
    const int qstart = hermitian_valued ? p : 0;
    for (int q = qstart; q < d; ++q) {
      auto nz = entry_functional(lhs, p, q);
      // real part row
      {
        Row row;
        row.ref = RowRef{tag, p, q, false, d, hermitian_valued};
        row.entries = nz;
        row.rhs = rhs(p, q).real();
        rows_.push_back(std::move(row));
      }
      // imaginary part row; a Hermitian-valued constraint has none on the
      // diagonal
      if (!hermitian_valued || p != q) {
        Row row;
        row.ref = RowRef{tag, p, q, true, d, hermitian_valued};
        row.entries.reserve(nz.size());
        for (auto e : nz) {
          e.coeff *= Complex(0, -1);  // Re(-i z) = Im(z)
          row.entries.push_back(e);
        }
        row.rhs = rhs(p, q).imag();
        rows_.push_back(std::move(row));
      }
    }
  }
}

void SdpProblem::add_equality(const MatrixExpr& lhs, const HermitianMatrix& rhs,
                              const std::string& tag) {
  expand_matrix_equality(lhs, rhs.mat(), tag, true);
}

void SdpProblem::add_complex_equality(const MatrixExpr& lhs, const Cmat& rhs,
                                      const std::string& tag) {
  expand_matrix_equality(lhs, rhs, tag, false);
}

void SdpProblem::add_scalar_equality(const ScalarExpr& lhs, double rhs, const std::string& tag) {
  if (tag_info_.count(tag)) throw std::invalid_argument("duplicate constraint tag " + tag);
  tag_info_[tag] = {1, true};
  tag_order_.push_back(tag);
  Row row;
  row.ref = RowRef{tag, 0, 0, false, 1, true};
  for (const auto& e : lhs.entries_) {
    if (e.i < 0) {  // plain trace
      const int d = vars_.at(e.v).dim;
      for (int i = 0; i < d; ++i) row.entries.push_back(Nonzero{e.v, i, i, e.c});
    } else {
      row.entries.push_back(Nonzero{e.v, e.i, e.j, e.c});
    }
  }
  for (const auto& cpt : lhs.components_) {
    row.entries.push_back(Nonzero{cpt.v, cpt.comp, -1, Complex(cpt.c, 0)});
  }
  row.rhs = rhs;
  rows_.push_back(std::move(row));
}

void SdpProblem::set_objective(Sense sense, const ScalarExpr& objective) {
  sense_ = sense;
  objective_ = objective;
  has_objective_ = true;
}

namespace {

// Lowered layout of one model variable.
struct VarLayout {
  enum class Kind { embedded_psd, split_pair, nonneg_scalar, soc };
  Kind kind;
  int dim;         // model dimension
  int block;       // first cone block index
  int offset;      // coordinate offset of first block
  int offset_neg;  // second block offset for split pairs
};

}  // namespace

struct Lowering {
  detail::ConicProblem conic;
  std::vector<VarLayout> layout;
  std::vector<std::vector<std::pair<int, double>>> row_coords;
  std::vector<std::pair<int, double>> obj_coords;
};

namespace {

// Accumulates the svec coordinates of the functional Re(c * X_ij) for a
// Hermitian variable lowered through the real embedding Y = [[A,-B],[B,A]].
void entry_coords(const VarLayout& L, int i, int j, Complex c,
                  std::vector<std::pair<int, double>>& out) {
  if (L.kind == VarLayout::Kind::soc) {
    throw std::invalid_argument("matrix entry referenced on a cone variable");
  }
  if (L.kind == VarLayout::Kind::nonneg_scalar) {
    if (i != 0 || j != 0) throw std::invalid_argument("scalar variable entry out of range");
    out.emplace_back(L.offset, c.real());
    return;
  }
  if (i > j) {
    std::swap(i, j);
    c = std::conj(c);
  }
  const int d = L.dim;
  const int D = 2 * d;
  auto push = [&](int p, int q, double w) {
    const int idx = detail::svec_index(D, p, q);
    const double scale = (p == q) ? 1.0 : 1.0 / kSqrt2;
    out.emplace_back(L.offset + idx, w * scale);
    if (L.kind == VarLayout::Kind::split_pair) {
      out.emplace_back(L.offset_neg + idx, -w * scale);
    }
  };
  if (i == j) {
    const double w = 0.5 * c.real();
    push(i, i, w);
    push(d + i, d + i, w);
  } else {
    const double wr = 0.5 * c.real();
    push(i, j, wr);
    push(d + i, d + j, wr);
    const double wi = 0.5 * c.imag();
    push(d + i, j, -wi);
    push(i, d + j, wi);
  }
}

void compress(std::vector<std::pair<int, double>>& coords) {
  std::sort(coords.begin(), coords.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t w = 0;
  for (size_t r = 0; r < coords.size(); ++r) {
    if (w > 0 && coords[w - 1].first == coords[r].first) {
      coords[w - 1].second += coords[r].second;
    } else {
      coords[w++] = coords[r];
    }
  }
  coords.resize(w);
}

}  // namespace

namespace {

Lowering lower_problem(const std::vector<std::string>& names,
                       const std::vector<int>& dims, const std::vector<bool>& psd,
                       const std::vector<bool>& soc) {
  Lowering low;
  int offset = 0;
  for (size_t v = 0; v < names.size(); ++v) {
    VarLayout L{};
    L.dim = dims[v];
    L.block = static_cast<int>(low.conic.blocks.size());
    L.offset = offset;
    if (soc[v]) {
      L.kind = VarLayout::Kind::soc;
      low.conic.blocks.push_back(
          {detail::ConeBlock::Kind::soc, dims[v], offset, dims[v]});
      offset += dims[v];
    } else if (dims[v] == 1 && psd[v]) {
      L.kind = VarLayout::Kind::nonneg_scalar;
      low.conic.blocks.push_back({detail::ConeBlock::Kind::nonneg, 1, offset, 1});
      offset += 1;
    } else if (psd[v]) {
      L.kind = VarLayout::Kind::embedded_psd;
      const int D = 2 * dims[v];
      low.conic.blocks.push_back(
          {detail::ConeBlock::Kind::psd, D, offset, detail::svec_len(D)});
      offset += detail::svec_len(D);
    } else {
      L.kind = VarLayout::Kind::split_pair;
      const int D = 2 * dims[v];
      low.conic.blocks.push_back(
          {detail::ConeBlock::Kind::psd, D, offset, detail::svec_len(D)});
      offset += detail::svec_len(D);
      L.offset_neg = offset;
      low.conic.blocks.push_back(
          {detail::ConeBlock::Kind::psd, D, offset, detail::svec_len(D)});
      offset += detail::svec_len(D);
    }
    low.layout.push_back(L);
  }
  return low;
}

}  // namespace

void SdpProblem::dump_lowered(std::ostream& os) const {
  os << "# tag row col part variable i j re im\n";
  for (const auto& row : rows_) {
    for (const auto& nz : row.entries) {
      os << row.ref.tag << " " << row.ref.p << " " << row.ref.q << " "
         << (row.ref.imag_part ? "im" : "re") << " " << vars_.at(nz.v).name << " " << nz.i << " "
         << nz.j << " " << nz.coeff.real() << " " << nz.coeff.imag() << "\n";
    }
    os << row.ref.tag << " " << row.ref.p << " " << row.ref.q << " "
       << (row.ref.imag_part ? "im" : "re") << " == " << row.rhs << "\n";
  }
}

SdpSolution SdpProblem::solve(const SolverOptions& opts) const {
  std::vector<std::string> names;
  std::vector<int> dims;
  std::vector<bool> psd, soc;
  for (const auto& v : vars_) {
    names.push_back(v.name);
    dims.push_back(v.dim);
    psd.push_back(v.psd);
    soc.push_back(v.soc);
  }
  Lowering low = lower_problem(names, dims, psd, soc);

  int n = 0;
  for (const auto& blk : low.conic.blocks) n = std::max(n, blk.offset + blk.len);
  const int m = static_cast<int>(rows_.size());

  low.conic.A = Eigen::MatrixXd::Zero(m, n);
  low.conic.b = Eigen::VectorXd::Zero(m);
  low.conic.c = Eigen::VectorXd::Zero(n);

  auto coords_of = [&](const std::vector<Nonzero>& entries) {
    std::vector<std::pair<int, double>> coords;
    for (const auto& nz : entries) {
      const VarLayout& L = low.layout.at(nz.v);
      if (nz.j < 0) {  // cone component reference
        if (L.kind == VarLayout::Kind::soc) {
          coords.emplace_back(L.offset + nz.i, nz.coeff.real());
        } else if (L.kind == VarLayout::Kind::nonneg_scalar) {
          coords.emplace_back(L.offset, nz.coeff.real());
        } else {
          throw std::invalid_argument("component reference on a matrix variable");
        }
      } else {
        entry_coords(L, nz.i, nz.j, nz.coeff, coords);
      }
    }
    compress(coords);
    return coords;
  };

  for (int i = 0; i < m; ++i) {
    auto coords = coords_of(rows_[i].entries);
    for (const auto& [col, val] : coords) low.conic.A(i, col) = val;
    low.conic.b[i] = rows_[i].rhs;
  }

  const double obj_sign = (sense_ == Sense::maximize) ? -1.0 : 1.0;
  if (has_objective_) {
    std::vector<Nonzero> obj_entries;
    for (const auto& e : objective_.entries_) {
      if (e.i < 0) {
        const int d = vars_.at(e.v).dim;
        for (int k = 0; k < d; ++k) obj_entries.push_back(Nonzero{e.v, k, k, e.c});
      } else {
        obj_entries.push_back(Nonzero{e.v, e.i, e.j, e.c});
      }
    }
    for (const auto& cpt : objective_.components_) {
      obj_entries.push_back(Nonzero{cpt.v, cpt.comp, -1, Complex(cpt.c, 0)});
    }
    for (const auto& [col, val] : coords_of(obj_entries)) low.conic.c[col] = obj_sign * val;
  }

  detail::ConicSolution cs = detail::solve_conic(low.conic, opts);

  SdpSolution out;
  out.status = cs.status;
  out.iterations = cs.iterations;
  out.message = cs.message;
  out.primal_value = obj_sign * cs.pobj;
  out.duality_gap = std::abs(cs.pobj - cs.dobj) /
                    (1.0 + std::abs(cs.pobj) + std::abs(cs.dobj));
  out.primal_residual = cs.pres;
  out.dual_residual = cs.dres;
  out.complementarity = cs.gap;

  if (cs.x.size() == 0) return out;

  // Lift primal values back to complex Hermitian form. The embedded block is
  // symmetrized against the complex structure first, which preserves
  // feasibility and objective exactly.
  for (size_t v = 0; v < vars_.size(); ++v) {
    const VarLayout& L = low.layout[v];
    if (L.kind == VarLayout::Kind::soc) {
      out.soc_variables[vars_[v].name] = cs.x.segment(L.offset, vars_[v].dim);
      continue;
    }
    if (L.kind == VarLayout::Kind::nonneg_scalar) {
      Cmat m1(1, 1);
      m1(0, 0) = cs.x[L.offset];
      out.variables[vars_[v].name] = HermitianMatrix(m1);
      continue;
    }
    const int d = vars_[v].dim;
    const int D = 2 * d;
    auto lift = [&](int off) {
      Eigen::MatrixXd Y(D, D);
      Eigen::VectorXd seg = cs.x.segment(off, detail::svec_len(D));
      detail::svec_unpack(seg, Y);
      Cmat X(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const double re = 0.5 * (Y(i, j) + Y(d + i, d + j));
          const double im = 0.5 * (Y(d + i, j) - Y(i, d + j));
          X(i, j) = Complex(re, im);
        }
      return X;
    };
    Cmat X = lift(L.offset);
    if (L.kind == VarLayout::Kind::split_pair) X -= lift(L.offset_neg);
    out.variables[vars_[v].name] = HermitianMatrix(std::move(X), 1e-6);
  }

  // Dual multipliers per tag. For Hermitian-valued constraints of dimension
  // dt the scalar row multipliers assemble into the Hermitian operator F with
  // sum_rows y * row(Pi) = Tr[F Pi].
  std::map<std::string, std::vector<std::pair<RowRef, double>>> grouped;
  for (int i = 0; i < m; ++i) {
    grouped[rows_[i].ref.tag].emplace_back(rows_[i].ref, obj_sign * cs.y[i]);
  }
  for (const auto& tag : tag_order_) {
    const auto [dt, herm] = tag_info_.at(tag);
    if (!herm) continue;
    if (dt == 1) {
      const double yv = grouped[tag].front().second;
      out.dual_scalars[tag] = yv;
      Cmat f1(1, 1);
      f1(0, 0) = yv;
      out.dual_matrices[tag] = HermitianMatrix(std::move(f1));
      continue;
    }
    Cmat F = Cmat::Zero(dt, dt);
    for (const auto& [ref, yv] : grouped[tag]) {
      if (ref.p == ref.q) {
        F(ref.p, ref.p) += Complex(yv, 0);
      } else if (!ref.imag_part) {
        F(ref.p, ref.q) += Complex(0.5 * yv, 0);
        F(ref.q, ref.p) += Complex(0.5 * yv, 0);
      } else {
        F(ref.p, ref.q) += Complex(0, 0.5 * yv);
        F(ref.q, ref.p) += Complex(0, -0.5 * yv);
      }
    }
    out.dual_matrices[tag] = HermitianMatrix(std::move(F), 1e-9);
  }
  return out;
}

std::map<std::string, HermitianMatrix> dual_witness(const SdpSolution& sol,
                                                    const std::vector<std::string>& tags) {
  std::map<std::string, HermitianMatrix> out;
  for (const auto& tag : tags) {
    auto it = sol.dual_matrices.find(tag);
    if (it == sol.dual_matrices.end()) {
      throw std::runtime_error("no dual multiplier exposed for constraint '" + tag + "'");
    }
    out[tag] = it->second;
  }
  return out;
}

}  // namespace steercert::sdp
