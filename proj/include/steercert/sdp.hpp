#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "steercert/qmath.hpp"

namespace steercert::sdp {

struct SolverOptions {
  double gap_tolerance = 1e-7;
  double feasibility_tolerance = 1e-8;
  int max_iterations = 200;
  bool verbose = false;
};

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };
enum class Sense { minimize, maximize };

std::string to_string(SolveStatus s);

using VarId = int;

/// Linear matrix-valued expression over declared variables. Terms are
/// accumulated and expanded entry-wise when the constraint is committed.
class MatrixExpr {
 public:
  explicit MatrixExpr(int dim) : dim_(dim) {}

  MatrixExpr& add(double coeff, VarId v);
  /// Partial transpose on factor `sys` of the tensor factorization `dims`
  /// (any number of factors).
  MatrixExpr& add_partial_transpose(double coeff, VarId v, std::vector<int> dims, int sys);
  MatrixExpr& add_partial_trace(double coeff, VarId v, std::vector<int> dims,
                                std::vector<int> keep);
  /// K * x for a scalar variable x.
  MatrixExpr& add_scalar_times(VarId scalar_var, HermitianMatrix coeff);
  /// coeff * (dim x dim sub-block of a larger Hermitian variable).
  MatrixExpr& add_block(double coeff, VarId big, int row0, int col0);
  /// coeff * (adjoint of a sub-block): entry (p, q) reads entry
  /// (col0 + p, row0 + q) of the host variable.
  MatrixExpr& add_block_adjoint(double coeff, VarId big, int row0, int col0);
  /// coeff * partial trace of a sub-block: the block at (row0, col0) has
  /// tensor factors `dims`; factors not in `keep` are traced out.
  MatrixExpr& add_block_partial_trace(double coeff, VarId big, int row0, int col0,
                                      std::vector<int> dims, std::vector<int> keep);
  /// coeff * partial transpose (factor `sys` of `dims`) of a sub-block.
  MatrixExpr& add_block_partial_transpose(double coeff, VarId big, int row0, int col0,
                                          std::vector<int> dims, int sys);
  /// Conditional reduction of a bipartite sub-block: keeps factor
  /// `kept_factor` and traces the other against K, e.g. Tr_2[(1 (x) K) X].
  MatrixExpr& add_block_conditional_trace(double coeff, VarId big, int row0, int col0,
                                          int kept_factor, int kept_dim,
                                          const HermitianMatrix& k);
  /// coeff * L X L^dagger; L maps the variable's space into the constraint
  /// space (rows = expression dim, cols = variable dim).
  MatrixExpr& add_sandwich(double coeff, VarId v, Cmat l);

  int dim() const { return dim_; }

 private:
  friend class SdpProblem;
  struct Plain {
    double c;
    VarId v;
  };
  struct PartialTranspose {
    double c;
    VarId v;
    std::vector<int> dims;
    int sys;
  };
  struct PartialTrace {
    double c;
    VarId v;
    std::vector<int> dims;
    std::vector<int> keep;
  };
  struct ScalarTimes {
    VarId v;
    HermitianMatrix coeff;
  };
  struct Block {
    double c;
    VarId v;
    int row0, col0;
    bool transposed;
  };
  struct BlockPartialTrace {
    double c;
    VarId v;
    int row0, col0;
    std::vector<int> dims;
    std::vector<int> keep;
  };
  struct BlockPartialTranspose {
    double c;
    VarId v;
    int row0, col0;
    std::vector<int> dims;
    int sys;
  };
  struct BlockConditionalTrace {
    double c;
    VarId v;
    int row0, col0;
    int kept_factor;
    int kept_dim;
    HermitianMatrix k;
  };
  struct Sandwich {
    double c;
    VarId v;
    Cmat l;
  };
  using Term = std::variant<Plain, PartialTranspose, PartialTrace, ScalarTimes, Block,
                            BlockPartialTrace, BlockPartialTranspose, BlockConditionalTrace,
                            Sandwich>;

  int dim_;
  std::vector<Term> terms_;
};

/// Linear scalar expression: traces against constants, individual matrix
/// entries, cone components.
class ScalarExpr {
 public:
  ScalarExpr& add_trace(double coeff, VarId v);
  ScalarExpr& add_trace(double coeff, VarId v, HermitianMatrix k);
  /// Re(coeff * X_ij): coeff = 1 reads the real part, coeff = -i the
  /// imaginary part of entry (i, j).
  ScalarExpr& add_entry(Complex coeff, VarId v, int i, int j);
  /// Component of a second-order-cone variable (or a scalar variable, comp 0).
  ScalarExpr& add_component(double coeff, VarId v, int comp);

 private:
  friend class SdpProblem;
  struct Entry {
    Complex c;
    VarId v;
    int i, j;
  };
  struct Component {
    double c;
    VarId v;
    int comp;
  };
  std::vector<Entry> entries_;
  std::vector<Component> components_;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  double primal_value = 0.0;
  double duality_gap = 0.0;  // |primal - dual| / (1 + |primal| + |dual|)
  int iterations = 0;
  std::string message;

  std::map<std::string, HermitianMatrix> variables;
  std::map<std::string, Eigen::VectorXd> soc_variables;
  /// Multipliers of matrix-valued equality constraints, as Hermitian
  /// operators F with sum_tags Tr[F_tag * rhs_tag] = primal_value.
  std::map<std::string, HermitianMatrix> dual_matrices;
  std::map<std::string, double> dual_scalars;

  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
};

/// Multipliers for the requested constraint tags; throws if a tag has no
/// exposed multiplier.
std::map<std::string, HermitianMatrix> dual_witness(const SdpSolution& sol,
                                                    const std::vector<std::string>& tags);

/// Block-variable semidefinite program in equality standard form:
///   optimize  <objective, vars>
///   s.t.      linear matrix/scalar equalities,  PSD/SOC cone memberships.
/// Complex Hermitian variables are lowered to real symmetric blocks through
/// the [[Re, -Im], [Im, Re]] embedding; multipliers are lifted back.
class SdpProblem {
 public:
  /// Hermitian matrix variable. dim == 1 with must_be_psd declares a
  /// nonnegative scalar. Without the PSD flag the variable is free
  /// (internally a difference of two PSD blocks).
  VarId add_hermitian_var(const std::string& name, int dim, bool must_be_psd = true);
  /// Second-order cone variable: x0 >= ||x_1..dim-1||.
  VarId add_soc_var(const std::string& name, int dim);

  void add_equality(const MatrixExpr& lhs, const HermitianMatrix& rhs, const std::string& tag);
  /// Equality whose value is a general complex matrix (e.g. ties between
  /// off-diagonal sub-blocks); expands both triangles.
  void add_complex_equality(const MatrixExpr& lhs, const Cmat& rhs, const std::string& tag);
  void add_scalar_equality(const ScalarExpr& lhs, double rhs, const std::string& tag);

  void set_objective(Sense sense, const ScalarExpr& objective);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::string& var_name(VarId v) const { return vars_.at(v).name; }

  /// Lowered conic data, one line per nonzero: tag, variable, row, col, re, im.
  void dump_lowered(std::ostream& os) const;

  SdpSolution solve(const SolverOptions& opts = {}) const;

 private:
  struct VarDecl {
    std::string name;
    int dim;
    bool psd;
    bool soc;
  };
  struct RowRef {
    std::string tag;
    int p, q;
    bool imag_part;
    int constraint_dim;
    bool hermitian_valued;
  };
  struct Nonzero {
    VarId v;
    int i, j;       // complex entry for Hermitian vars, (comp, -1) for cones
    Complex coeff;  // functional contribution Re(coeff * X_ij)
  };
  struct Row {
    RowRef ref;
    std::vector<Nonzero> entries;
    double rhs;
  };

  void expand_matrix_equality(const MatrixExpr& lhs, const Cmat& rhs, const std::string& tag,
                              bool hermitian_valued);
  std::vector<Nonzero> entry_functional(const MatrixExpr& lhs, int p, int q) const;

  std::vector<VarDecl> vars_;
  std::vector<Row> rows_;
  std::vector<std::string> tag_order_;
  std::map<std::string, std::pair<int, bool>> tag_info_;  // dim, hermitian_valued
  Sense sense_ = Sense::minimize;
  ScalarExpr objective_;
  bool has_objective_ = false;
};

}  // namespace steercert::sdp
