#include <cmath>
#include <random>

#include "doctest.h"
#include "steercert/qmath.hpp"

using namespace steercert;

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

TEST_SUITE("qmath") {
  TEST_CASE("hermitian validation") {
    Cmat bad(2, 2);
    bad << 1.0, Complex(0, 1), Complex(0, 1), 1.0;  // symmetric, not hermitian
    CHECK_THROWS(HermitianMatrix(bad));
    CHECK_THROWS(HermitianMatrix(Cmat::Zero(2, 3)));
    CHECK_NOTHROW(HermitianMatrix(Cmat::Identity(3, 3)));
  }

  TEST_CASE("kron identities") {
    const auto i2 = HermitianMatrix::identity(2);
    const auto i4 = kron(i2, i2);
    CHECK((i4.mat() - Cmat::Identity(4, 4)).norm() == doctest::Approx(0.0));

    const auto zi = kron(pauli_matrix(Pauli::Z), i2);
    Eigen::Vector4d diag(1, 1, -1, -1);
    CHECK((zi.mat() - Cmat(diag.cast<Complex>().asDiagonal())).norm() ==
          doctest::Approx(0.0));

    // (X (x) X)|00> = |11>, checked entrywise on the matrix column
    const auto xx = kron(pauli_matrix(Pauli::X), pauli_matrix(Pauli::X));
    Eigen::VectorXcd e00 = Eigen::VectorXcd::Zero(4);
    e00(0) = 1.0;
    Eigen::VectorXcd mapped = xx.mat() * e00;
    CHECK(std::abs(mapped(3) - 1.0) < 1e-15);
    CHECK(mapped.head(3).norm() < 1e-15);

    // associativity up to exact entries
    const auto a = random_hermitian(2, 11), b = random_hermitian(3, 12),
               c = random_hermitian(2, 13);
    CHECK((kron(kron(a, b), c).mat() - kron(a, kron(b, c)).mat()).cwiseAbs().maxCoeff() <
          1e-14);
  }

  TEST_CASE("partial trace") {
    const auto psi = psi_plus_state();
    const auto redA = partial_trace(psi, {2, 2}, {0});
    CHECK((redA.mat() - 0.5 * Cmat::Identity(2, 2)).norm() < 1e-14);

    // two-qubit reduction of the W state
    const auto red = partial_trace(w_state(), {2, 2, 2}, {0, 1});
    Cmat expected = (2.0 / 3.0) * psi_plus_state().mat();
    expected(0, 0) += 1.0 / 3.0;
    CHECK((red.mat() - expected).norm() < 1e-14);

    const auto mm = partial_trace(maximally_mixed(8), {2, 2, 2}, {1});
    CHECK((mm.mat() - 0.5 * Cmat::Identity(2, 2)).norm() < 1e-14);

    // trace preservation and the kron compatibility property
    const auto a = random_hermitian(2, 21), b = random_hermitian(3, 22);
    const auto ab = kron(a, b);
    CHECK(partial_trace(ab, {2, 3}, {0, 1}).trace() == doctest::Approx(ab.trace()));
    const auto ta = partial_trace(ab, {2, 3}, {0});
    CHECK((ta.mat() - b.trace() * a.mat()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS(partial_trace(a, {2, 3}, {0}));
    CHECK_THROWS(partial_trace(ab, {2, 3}, {}));
  }

  TEST_CASE("partial transpose") {
    // diagonal states are invariant
    Cmat diag = Eigen::Vector4d(0.4, 0.3, 0.2, 0.1).cast<Complex>().asDiagonal();
    const HermitianMatrix d(diag);
    CHECK((partial_transpose(d, {2, 2}, 0).mat() - d.mat()).norm() < 1e-15);

    // entangled psi+ has negative partial transpose with eigenvalue -1/2
    const auto pt = partial_transpose(psi_plus_state(), {2, 2}, 0);
    CHECK(pt.min_eigenvalue() == doctest::Approx(-0.5).epsilon(1e-12));

    // involution and trace/hermiticity preservation on random input
    const auto m = random_hermitian(6, 33);
    const auto ptm = partial_transpose(m, {2, 3}, 1);
    CHECK((partial_transpose(ptm, {2, 3}, 1).mat() - m.mat()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(ptm.trace() == doctest::Approx(m.trace()));
    CHECK_THROWS(partial_transpose(m, {2, 2}, 0));
  }

  TEST_CASE("pauli povms") {
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const auto povm = pauli_povm(p);
      CHECK(povm.outcomes() == 2);
      CHECK_NOTHROW(povm.validate());
      // outcome 0 is the +1 eigenspace
      const auto obs = pauli_matrix(p);
      CHECK(hs_inner(povm.elements[0], obs) == doctest::Approx(1.0));
      CHECK(hs_inner(povm.elements[1], obs) == doctest::Approx(-1.0));
      // rank one projectors
      for (const auto& e : povm.elements) {
        CHECK((e.mat() * e.mat() - e.mat()).norm() < 1e-14);
        CHECK(e.trace() == doctest::Approx(1.0));
      }
    }
    const auto z = pauli_povm(Pauli::Z);
    CHECK(std::abs(z.elements[0](0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(z.elements[1](1, 1) - 1.0) < 1e-15);
    CHECK_THROWS(pauli_from_label("Q"));
  }

  TEST_CASE("w state") {
    const auto w = w_state();
    CHECK(w.trace() == doctest::Approx(1.0));
    const auto m = state_metrics(w, w);
    CHECK(m.purity == doctest::Approx(1.0));
    CHECK(m.fidelity == doctest::Approx(1.0));
    CHECK(std::abs(w(1, 1) - 1.0 / 3.0) < 1e-15);  // <001|W><W|001>
  }

  TEST_CASE("state metrics") {
    const auto w = w_state();
    const auto mixed = state_metrics(maximally_mixed(8), w);
    CHECK(mixed.purity == doctest::Approx(1.0 / 8.0));
    CHECK(mixed.fidelity == doctest::Approx(1.0 / 8.0));

    // direct formula oracle at v = 0.9:
    //   purity = v^2 + 2 v (1-v)/8 + (1-v)^2/8,  fidelity = v + (1-v)/8
    const double v = 0.9;
    const auto noisy = state_metrics(white_noise_mix(w, v), w);
    const double purity_oracle = v * v + 2 * v * (1 - v) / 8.0 + (1 - v) * (1 - v) / 8.0;
    CHECK(noisy.purity == doctest::Approx(purity_oracle).epsilon(1e-12));
    CHECK(noisy.fidelity == doctest::Approx(v + (1 - v) / 8.0).epsilon(1e-12));

    Cmat neg = Cmat::Identity(2, 2);
    neg(1, 1) = -0.5;
    neg(0, 0) = 1.5;
    CHECK_THROWS(state_metrics(HermitianMatrix(neg), HermitianMatrix(neg)));
  }
}
