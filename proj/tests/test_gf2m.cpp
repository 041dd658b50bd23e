#include <set>
#include <stdexcept>

#include "doctest.h"
#include "nbldpc/gf2m.hpp"

using namespace nbldpc;

TEST_CASE("power tables match the hand-expanded small fields") {
  const FieldCtx f4 = FieldCtx::with_default_poly(2);
  CHECK(f4.exp_table() == std::vector<int>{1, 2, 3});

  // x^3 = x + 1: 1, x, x^2, x+1, x^2+x, x^2+x+1, x^2+1
  const FieldCtx f8 = FieldCtx::with_default_poly(3);
  CHECK(f8.exp_table() == std::vector<int>{1, 2, 4, 3, 6, 7, 5});
  CHECK(f8.mul(4, 6) == 5);
  CHECK(f8.mul(6, 4) == 5);
}

TEST_CASE("field axioms, exhaustive over GF(16)") {
  const FieldCtx f = FieldCtx::with_default_poly(4);
  const int q = f.q();
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      CHECK(f.mul(a, b) == f.mul(b, a));
      for (int c = 0; c < q; ++c) {
        CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
        CHECK(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
      }
    }
  for (int a = 1; a < q; ++a) {
    CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK(f.div(a, a) == 1);
  }
  CHECK_THROWS_AS(f.inv(0), std::domain_error);
}

TEST_CASE("default polynomials are accepted for every supported m") {
  for (int m = 1; m <= 8; ++m) {
    const FieldCtx f = FieldCtx::with_default_poly(m);
    CHECK(f.q() == (1 << m));
    std::set<int> seen(f.exp_table().begin(), f.exp_table().end());
    CHECK(int(seen.size()) == f.q() - 1);
  }
}

TEST_CASE("reducible polynomial is rejected") {
  // x^3 + x^2 + x + 1 = (x + 1)(x^2 + 1)
  CHECK_THROWS_AS(FieldCtx(3, 0xF), std::invalid_argument);
}

TEST_CASE("bit-subset sets match their definition and translation rule") {
  for (int m : {2, 3, 4}) {
    const FieldCtx f = FieldCtx::with_default_poly(m);
    const int q = f.q();
    for (int kappa = 1; kappa < q; ++kappa)
      for (int h = 1; h < q; ++h) {
        const ElemMask& s = f.btilde_set(kappa, h);
        CHECK(s.count() == q / 2);
        CHECK(!s.contains(0));
        for (int a = 0; a < q; ++a) {
          int par = 0;
          for (int k = 1; k <= m; ++k)
            if ((kappa >> (k - 1)) & 1) par ^= f.bit(f.mul(h, a), k);
          CHECK(s.contains(a) == (par == 1));
          // membership moves through the check value
          CHECK(s.contains(a) == f.btilde_set(kappa, 1).contains(f.mul(h, a)));
        }
      }
    for (int k = 1; k <= m; ++k)
      for (int h = 1; h < q; ++h) CHECK(f.b_set(k, h) == f.btilde_set(1 << (k - 1), h));
  }
}

TEST_CASE("element masks count and compare") {
  ElemMask s;
  CHECK(s.count() == 0);
  s.insert(0);
  s.insert(63);
  s.insert(64);
  s.insert(255);
  CHECK(s.count() == 4);
  CHECK(s.contains(64));
  CHECK(!s.contains(65));
}
