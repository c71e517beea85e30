#include <random>
#include <sstream>

#include "doctest.h"
#include "steercert/sdp.hpp"

using namespace steercert;
using namespace steercert::sdp;

namespace {

HermitianMatrix random_hermitian(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto u = [&] { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  Cmat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(u(), u());
  return HermitianMatrix(0.5 * (m + m.adjoint().eval()), 1e-9);
}

}  // namespace

TEST_SUITE("sdp") {
  TEST_CASE("max eigenvalue program") {
    // min t  s.t.  t I - X psd  with X = diag(1, 2)  ->  t = 2
    SdpProblem p;
    const VarId t = p.add_hermitian_var("t", 1);
    const VarId slack = p.add_hermitian_var("S", 2);
    Cmat x = Cmat::Zero(2, 2);
    x(0, 0) = 1;
    x(1, 1) = 2;
    MatrixExpr lhs(2);
    lhs.add(1.0, slack);
    lhs.add_scalar_times(t, HermitianMatrix::identity(2) * -1.0);
    p.add_equality(lhs, HermitianMatrix(-x), "shift");
    ScalarExpr obj;
    obj.add_component(1.0, t, 0);
    p.set_objective(Sense::minimize, obj);

    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.duality_gap <= 1e-6);
  }

  TEST_CASE("feasibility only problem") {
    SdpProblem p;
    const VarId x = p.add_hermitian_var("X", 3);
    ScalarExpr tr;
    tr.add_trace(1.0, x);
    p.add_scalar_equality(tr, 1.0, "unit-trace");
    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(0.0));
    CHECK(sol.variables.at("X").trace() == doctest::Approx(1.0).epsilon(1e-7));
  }

  TEST_CASE("largest eigenvalue of a random hermitian via duality") {
    // max <C, X> s.t. Tr X = 1, X psd  ->  lambda_max(C); the multiplier of
    // the trace constraint equals lambda_max as well.
    const auto C = random_hermitian(4, 7);
    SdpProblem p;
    const VarId x = p.add_hermitian_var("X", 4);
    ScalarExpr tr;
    tr.add_trace(1.0, x);
    p.add_scalar_equality(tr, 1.0, "unit-trace");
    ScalarExpr obj;
    obj.add_trace(1.0, x, C);
    p.set_objective(Sense::maximize, obj);

    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    const double lmax = C.eigenvalues().maxCoeff();
    CHECK(sol.primal_value == doctest::Approx(lmax).epsilon(1e-6));
    CHECK(sol.dual_scalars.at("unit-trace") == doctest::Approx(lmax).epsilon(1e-5));

    // solution matrix is the top eigenprojector here; check feasibility and
    // objective agreement
    const auto& X = sol.variables.at("X");
    CHECK(X.min_eigenvalue() >= -1e-8);
    CHECK(hs_inner(C, X) == doctest::Approx(lmax).epsilon(1e-6));
  }

  TEST_CASE("matrix equality dual assembles witness operators") {
    // min <I, X> s.t. X = B (psd);  multiplier F of the equality satisfies
    // Tr[F B] = primal value = Tr B and F = I.
    Cmat b = Cmat::Zero(2, 2);
    b(0, 0) = 0.7;
    b(1, 1) = 0.4;
    b(0, 1) = Complex(0.1, 0.05);
    b(1, 0) = std::conj(b(0, 1));
    SdpProblem p;
    const VarId x = p.add_hermitian_var("X", 2);
    MatrixExpr lhs(2);
    lhs.add(1.0, x);
    const HermitianMatrix B(b);
    p.add_equality(lhs, B, "pin");
    ScalarExpr obj;
    obj.add_trace(1.0, x);
    p.set_objective(Sense::minimize, obj);
    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(B.trace()).epsilon(1e-7));
    const auto w = dual_witness(sol, {"pin"});
    CHECK(hs_inner(w.at("pin"), B) == doctest::Approx(sol.primal_value).epsilon(1e-5));
    CHECK((w.at("pin").mat() - Cmat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-5);
    CHECK_THROWS(dual_witness(sol, {"missing"}));
  }

  TEST_CASE("constraint scaling scales multiplier inversely") {
    auto build = [](double scale) {
      const auto C = random_hermitian(3, 42);
      SdpProblem p;
      const VarId x = p.add_hermitian_var("X", 3);
      ScalarExpr tr;
      tr.add_trace(scale, x);
      p.add_scalar_equality(tr, scale, "tr");
      ScalarExpr obj;
      obj.add_trace(1.0, x, C);
      p.set_objective(Sense::maximize, obj);
      return p.solve();
    };
    const auto s1 = build(1.0);
    const auto s3 = build(3.0);
    REQUIRE(s1.status == SolveStatus::optimal);
    REQUIRE(s3.status == SolveStatus::optimal);
    CHECK(s1.primal_value == doctest::Approx(s3.primal_value).epsilon(1e-6));
    CHECK(s1.dual_scalars.at("tr") ==
          doctest::Approx(3.0 * s3.dual_scalars.at("tr")).epsilon(1e-5));
  }

  TEST_CASE("partial transpose and partial trace terms") {
    // pin Z through its partial transpose and a redundant-free reduction row;
    // the solver must reproduce Z = X exactly
    const auto X = random_hermitian(4, 5);
    Cmat xm = X.mat() + 2.5 * Cmat::Identity(4, 4);  // keep it psd
    const HermitianMatrix Xpsd(xm);
    SdpProblem p;
    const VarId z = p.add_hermitian_var("Z", 4);
    MatrixExpr pin(4);
    pin.add_partial_transpose(1.0, z, {2, 2}, 0);
    p.add_equality(pin, partial_transpose(Xpsd, {2, 2}, 0), "pin-pt");
    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.variables.at("Z").frobenius_distance(Xpsd) < 1e-5);

    // partial trace rows: constrain only the reduction and verify it holds
    // on the returned matrix
    SdpProblem p2;
    const VarId v = p2.add_hermitian_var("V", 4);
    MatrixExpr red(2);
    red.add_partial_trace(1.0, v, {2, 2}, {1});
    p2.add_equality(red, HermitianMatrix(0.5 * Cmat::Identity(2, 2)), "red");
    ScalarExpr obj2;
    obj2.add_trace(1.0, v, random_hermitian(4, 77));
    p2.set_objective(Sense::minimize, obj2);
    const auto sol2 = p2.solve();
    REQUIRE(sol2.status == SolveStatus::optimal);
    const auto vred = partial_trace(sol2.variables.at("V"), {2, 2}, {1});
    CHECK((vred.mat() - 0.5 * Cmat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("second order cone epigraph") {
    // min u0 s.t. u_tail = q  ->  u0 = ||q||
    Eigen::VectorXd q(3);
    q << 0.3, -1.2, 0.4;
    SdpProblem p;
    const VarId u = p.add_soc_var("u", 4);
    for (int k = 0; k < 3; ++k) {
      ScalarExpr pin;
      pin.add_component(1.0, u, k + 1);
      p.add_scalar_equality(pin, q[k], "pin" + std::to_string(k));
    }
    ScalarExpr obj;
    obj.add_component(1.0, u, 0);
    p.set_objective(Sense::minimize, obj);
    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(q.norm()).epsilon(1e-7));
    CHECK(sol.soc_variables.at("u")[0] == doctest::Approx(q.norm()).epsilon(1e-6));
  }

  TEST_CASE("free hermitian variable via split pair") {
    // min Tr[X] over free X with X pinned entrywise to a non-psd matrix
    Cmat b = Cmat::Zero(2, 2);
    b(0, 0) = -1.0;
    b(1, 1) = 0.25;
    SdpProblem p;
    const VarId x = p.add_hermitian_var("X", 2, /*must_be_psd=*/false);
    MatrixExpr lhs(2);
    lhs.add(1.0, x);
    p.add_equality(lhs, HermitianMatrix(b), "pin");
    const auto sol = p.solve();
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.variables.at("X").frobenius_distance(HermitianMatrix(b)) < 1e-6);
  }

  TEST_CASE("strong duality on random feasible instances") {
    // random C, random feasible equality pins on traces against random
    // hermitians; |primal - dual| <= 10 * gap tolerance
    for (unsigned seed : {1u, 2u, 3u}) {
      const int d = 3;
      const auto C = random_hermitian(d, seed);
      const auto K = random_hermitian(d, seed + 100);
      SdpProblem p;
      const VarId x = p.add_hermitian_var("X", d);
      ScalarExpr tr;
      tr.add_trace(1.0, x);
      p.add_scalar_equality(tr, 1.0, "tr");
      ScalarExpr probe;
      probe.add_trace(1.0, x, K);
      p.add_scalar_equality(probe, K.trace() / d, "probe");  // satisfied by I/d
      ScalarExpr obj;
      obj.add_trace(1.0, x, C);
      p.set_objective(Sense::minimize, obj);
      SolverOptions opts;
      const auto sol = p.solve(opts);
      REQUIRE(sol.status == SolveStatus::optimal);
      CHECK(sol.duality_gap <= 10 * opts.gap_tolerance);
      // dual evaluation: sum of multipliers times rhs reproduces the optimum
      const double dual_eval =
          sol.dual_scalars.at("tr") * 1.0 + sol.dual_scalars.at("probe") * (K.trace() / d);
      CHECK(dual_eval == doctest::Approx(sol.primal_value).epsilon(1e-5));
    }
  }

  TEST_CASE("solve is deterministic") {
    auto run = [] {
      const auto C = random_hermitian(4, 9);
      SdpProblem p;
      const VarId x = p.add_hermitian_var("X", 4);
      ScalarExpr tr;
      tr.add_trace(1.0, x);
      p.add_scalar_equality(tr, 1.0, "tr");
      ScalarExpr obj;
      obj.add_trace(1.0, x, C);
      p.set_objective(Sense::maximize, obj);
      return p.solve();
    };
    const auto a = run(), b = run();
    CHECK(a.primal_value == b.primal_value);  // bit identical
    CHECK(a.iterations == b.iterations);
  }

  TEST_CASE("lowered dump names every nonzero") {
    SdpProblem p;
    const VarId x = p.add_hermitian_var("X", 2);
    ScalarExpr tr;
    tr.add_trace(1.0, x);
    p.add_scalar_equality(tr, 1.0, "tr");
    std::ostringstream os;
    p.dump_lowered(os);
    CHECK(os.str().find("tr") != std::string::npos);
    CHECK(os.str().find("X") != std::string::npos);
  }
}
