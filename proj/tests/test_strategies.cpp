#include <map>

#include "doctest.h"
#include "steercert/strategies.hpp"

using namespace steercert;

TEST_SUITE("strategies") {
  TEST_CASE("enumeration counts and order") {
    auto s32 = enumerate_deterministic(3, 2);
    CHECK(s32.size() == 8);
    auto s12 = enumerate_deterministic(1, 2);
    REQUIRE(s12.size() == 2);
    CHECK(s12[0].response == std::vector<int>{0});
    CHECK(s12[1].response == std::vector<int>{1});
    CHECK(enumerate_deterministic(2, 3).size() == 9);

    // lexicographic order, no duplicates
    std::map<std::vector<int>, int> seen;
    for (const auto& s : s32) seen[s.response]++;
    CHECK(seen.size() == 8);
    CHECK(s32[5].response == std::vector<int>{1, 0, 1});

    CHECK_THROWS(enumerate_deterministic(30, 4));
    CHECK_THROWS(enumerate_deterministic(0, 2));
  }

  TEST_CASE("each strategy is a conditional distribution") {
    for (const auto& s : enumerate_deterministic(3, 4)) {
      for (int x = 0; x < 3; ++x) {
        double total = 0;
        for (int a = 0; a < 4; ++a) total += s(a, x);
        CHECK(total == doctest::Approx(1.0));
      }
    }
  }

  TEST_CASE("bijectivity against brute force") {
    // every deterministic response function over 2 settings x 3 outcomes is
    // hit exactly once
    auto all = enumerate_deterministic(2, 3);
    std::map<std::pair<int, int>, int> hits;
    for (int r0 = 0; r0 < 3; ++r0)
      for (int r1 = 0; r1 < 3; ++r1) {
        int found = 0;
        for (const auto& s : all)
          if (s.response[0] == r0 && s.response[1] == r1) ++found;
        CHECK(found == 1);
      }
  }

  TEST_CASE("product strategies") {
    auto sa = enumerate_deterministic(3, 2);
    auto prod = product_strategies(sa, sa);
    CHECK(prod.size() == 64);
    // mu-major ordering and indicator products
    const auto& [a, b] = prod[13];  // 13 = 1 * 8 + 5
    CHECK(a.response == sa[1].response);
    CHECK(b.response == sa[5].response);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        const double val = a(0, x) * b(1, y);
        CHECK((val == 0.0 || val == 1.0));
      }
    auto single = product_strategies({sa[0]}, {sa[7]});
    CHECK(single.size() == 1);
    CHECK_THROWS(product_strategies({}, sa));
  }
}
