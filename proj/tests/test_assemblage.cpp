#include <cmath>

#include "doctest.h"
#include "steercert/assemblage.hpp"

using namespace steercert;

namespace {

HermitianMatrix w_reduced() { return partial_trace(w_state(), {2, 2, 2}, {0, 1}); }

}  // namespace

TEST_SUITE("assemblage") {
  TEST_CASE("one untrusted on the reduced W state") {
    const auto asmb = build_one_untrusted(w_reduced(), pauli_xyz(), 0, {2, 2});
    CHECK(asmb.scenario.trusted_dim == 2);
    CHECK(asmb.members.size() == 6);
    const auto rep = validate(asmb);
    CHECK(rep.all_ok());

    // p(a|x) = Tr(sigma_a|x) recovered against direct Born values
    const auto rho = w_reduced();
    const auto povms = pauli_xyz();
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a) {
        const auto op = kron(povms[x].elements[a], HermitianMatrix::identity(2));
        CHECK(asmb.at({a}, {x}).trace() ==
              doctest::Approx(hs_inner(op, rho)).epsilon(1e-12));
      }

    // totals equal the trusted-side reduction for every setting
    const auto rho_b = partial_trace(rho, {2, 2}, {1});
    for (int x = 0; x < 3; ++x) {
      CHECK(asmb.total_for_setting(x).frobenius_distance(rho_b) < 1e-12);
    }
  }

  TEST_CASE("one untrusted from a product state is uncorrelated") {
    const auto asmb = build_one_untrusted(maximally_mixed(4), pauli_xyz(), 0, {2, 2});
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a) {
        const auto& m = asmb.at({a}, {x});
        CHECK((m.mat() - 0.25 * Cmat::Identity(2, 2)).norm() < 1e-13);
      }
  }

  TEST_CASE("one untrusted on the full W state keeps trusted pair") {
    const auto asmb = build_one_untrusted(w_state(), pauli_xyz(), 0, {2, 2, 2});
    CHECK(asmb.scenario.trusted_dim == 4);
    const auto rho_bc = partial_trace(w_state(), {2, 2, 2}, {1, 2});
    for (int x = 0; x < 3; ++x) {
      CHECK(asmb.total_for_setting(x).frobenius_distance(rho_bc) < 1e-12);
    }
    CHECK(validate(asmb).all_ok());
  }

  TEST_CASE("two untrusted") {
    const auto asmb = build_two_untrusted(w_state(), pauli_xyz(), pauli_xyz());
    CHECK(asmb.members.size() == 36);
    CHECK(validate(asmb).all_ok());
    for (int s = 0; s < 9; ++s) {
      CHECK(asmb.total_for_setting(s).trace() == doctest::Approx(1.0));
    }

    // product state factorizes
    Eigen::VectorXcd ket000 = Eigen::VectorXcd::Zero(8);
    ket000(0) = 1.0;
    const auto asmb0 =
        build_two_untrusted(HermitianMatrix(ket000 * ket000.adjoint()), pauli_xyz(), pauli_xyz());
    const auto povms = pauli_xyz();
    Eigen::VectorXcd ket0 = Eigen::VectorXcd::Zero(2);
    ket0(0) = 1.0;
    const HermitianMatrix zero_state(ket0 * ket0.adjoint());
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const double pa = hs_inner(povms[x].elements[a], zero_state);
            const double pb = hs_inner(povms[y].elements[b], zero_state);
            CHECK(asmb0.at({a, b}, {x, y}).frobenius_distance(zero_state * (pa * pb)) < 1e-12);
          }

    // white noise: every member I/8 with trace 1/4
    const auto noise = build_two_untrusted(maximally_mixed(8), pauli_xyz(), pauli_xyz());
    for (const auto& m : noise.members) {
      CHECK((m.mat() - Cmat::Identity(2, 2) / 8.0).norm() < 1e-13);
    }
  }

  TEST_CASE("maximally mixed assemblage") {
    const auto one = maximally_mixed_assemblage(Scenario::one_untrusted(2));
    for (const auto& m : one.members)
      CHECK((m.mat() - 0.25 * Cmat::Identity(2, 2)).norm() < 1e-15);
    const auto tri = maximally_mixed_assemblage(Scenario::one_untrusted(4));
    for (const auto& m : tri.members)
      CHECK((m.mat() - Cmat::Identity(4, 4) / 8.0).norm() < 1e-15);
    const auto two = maximally_mixed_assemblage(Scenario::two_untrusted());
    for (const auto& m : two.members)
      CHECK((m.mat() - Cmat::Identity(2, 2) / 8.0).norm() < 1e-15);
    for (int s = 0; s < two.scenario.joint_settings(); ++s)
      CHECK(two.total_for_setting(s).trace() == doctest::Approx(1.0));
    CHECK(validate(one).all_ok());
    CHECK(validate(two).all_ok());
  }

  TEST_CASE("trace out trusted subsystem") {
    const auto bc = build_one_untrusted(w_state(), pauli_xyz(), 0, {2, 2, 2});
    const auto dropC = trace_out_trusted_subsystem(bc, 1);
    const auto direct =
        build_one_untrusted(partial_trace(w_state(), {2, 2, 2}, {0, 1}), pauli_xyz(), 0, {2, 2});
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a) {
        CHECK(dropC.at({a}, {x}).frobenius_distance(direct.at({a}, {x})) < 1e-12);
      }
    // normalization is preserved
    for (int x = 0; x < 3; ++x)
      CHECK(dropC.total_for_setting(x).trace() == doctest::Approx(1.0));

    const auto mm = trace_out_trusted_subsystem(
        maximally_mixed_assemblage(Scenario::one_untrusted(4)), 0);
    for (const auto& m : mm.members)
      CHECK((m.mat() - 0.25 * Cmat::Identity(2, 2)).norm() < 1e-15);

    CHECK_THROWS(trace_out_trusted_subsystem(direct, 0));  // already a single qubit
  }

  TEST_CASE("validate flags corrupted members") {
    auto asmb = build_one_untrusted(w_reduced(), pauli_xyz(), 0, {2, 2});
    const double tr = asmb.at({0}, {0}).trace();
    Cmat bad = Cmat::Zero(2, 2);
    bad(0, 0) = tr + 0.01;
    bad(1, 1) = -0.01;  // explicit negative eigenvalue, trace preserved
    asmb.at({0}, {0}) = HermitianMatrix(bad);
    const auto rep = validate(asmb);
    CHECK_FALSE(rep.all_ok());
    CHECK_FALSE(rep.psd_ok);
    CHECK(rep.psd_violation == doctest::Approx(0.01));
    CHECK(rep.signalling_residual > 1e-3);  // totals now differ across settings
  }

  TEST_CASE("merge untrusted flattens indices consistently") {
    const auto two = build_two_untrusted(w_state(), pauli_xyz(), pauli_xyz());
    const auto merged = merge_untrusted(two);
    CHECK(merged.scenario.n_untrusted == 1);
    CHECK(merged.scenario.settings_per_untrusted[0] == 9);
    CHECK(merged.scenario.outcomes_per_untrusted[0] == 4);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            CHECK(merged.at({a * 2 + b}, {x * 3 + y})
                      .frobenius_distance(two.at({a, b}, {x, y})) == 0.0);
          }
    CHECK(validate(merged).all_ok());
  }
}
