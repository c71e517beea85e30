#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "steercert/sdp.hpp"

namespace steercert::sdp::detail {

// Real conic program in equality standard form:
//   min c'x   s.t.  A x = b,  x in K,
// K a product of PSD blocks (svec packed, sqrt(2) off-diagonals), second-order
// cones and nonnegative scalars. Solved by a Nesterov-Todd scaled primal-dual
// predictor-corrector method; dense normal equations, which is the right
// trade-off for the small dense blocks this library produces.

struct ConeBlock {
  enum class Kind { psd, soc, nonneg };
  Kind kind;
  int dim;     // matrix dim for psd, vector length otherwise
  int offset;  // first coordinate in x
  int len;     // number of coordinates
};

struct ConicProblem {
  std::vector<ConeBlock> blocks;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  int n() const { return static_cast<int>(A.cols()); }
  int m() const { return static_cast<int>(A.rows()); }
};

struct ConicSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  Eigen::VectorXd x, y, s;
  double pobj = 0.0, dobj = 0.0;
  double pres = 0.0, dres = 0.0, gap = 0.0;
  int iterations = 0;
  std::string message;
};

ConicSolution solve_conic(const ConicProblem& prob, const SolverOptions& opts);

// svec helpers (column-major lower triangle, off-diagonals scaled by sqrt. 2
// so that dot products equal trace inner products).
int svec_len(int dim);
int svec_index(int dim, int i, int j);
void svec_pack(const Eigen::MatrixXd& mat, Eigen::Ref<Eigen::VectorXd> out);
void svec_unpack(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::MatrixXd& mat);

}  // namespace steercert::sdp::detail
