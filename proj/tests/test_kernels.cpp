#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "nbldpc/rng.hpp"
#include "nbldpc/simd_kernels.hpp"

using namespace nbldpc;

namespace {

bool have_avx2() { return __builtin_cpu_supports("avx2"); }

std::vector<double> randvec(RngStream& rng, size_t n, double span = 4.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = span * (2 * rng.uniform01() - 1);
  return v;
}

}  // namespace

// the elementwise kernels must agree bitwise so the decoders are byte
// reproducible whichever backend dispatch picks
TEST_CASE("scalar and AVX2 elementwise kernels match bit for bit") {
  if (!have_avx2()) return;
  const auto& sc = kern::scalar_kernels();
  const auto& vx = kern::avx2_kernels();
  RngStream rng(21, 0);
  // lengths straddling vector width boundaries, including ragged tails
  for (size_t n : {size_t(1), size_t(3), size_t(4), size_t(5), size_t(8), size_t(13),
                   size_t(31), size_t(32), size_t(67), size_t(1000)}) {
    const auto s = randvec(rng, n), eta = randvec(rng, n), gamma = randvec(rng, n);
    const auto w = randvec(rng, n), z = randvec(rng, n);
    std::vector<double> a(n), b(n);

    sc.fused_sub2(a.data(), s.data(), eta.data(), gamma.data(), 0.5, 0.25, n);
    vx.fused_sub2(b.data(), s.data(), eta.data(), gamma.data(), 0.5, 0.25, n);
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

    sc.relax_mix(a.data(), w.data(), z.data(), 1.9, n);
    vx.relax_mix(b.data(), w.data(), z.data(), 1.9, n);
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

    a = s;
    b = s;
    sc.clip(a.data(), -1.0, 1.0, n);
    vx.clip(b.data(), -1.0, 1.0, n);
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

    sc.affine(a.data(), s.data(), 0.7, -0.3, n);
    vx.affine(b.data(), s.data(), 0.7, -0.3, n);
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

    // dual_update: lam elementwise bitwise, accumulators within reduction slop
    auto lam_a = randvec(rng, n);
    auto lam_b = lam_a;
    const auto h = randvec(rng, n), znew = randvec(rng, n), zold = randvec(rng, n);
    double pa = 0, ca = 0, pb = 0, cb = 0;
    sc.dual_update(lam_a.data(), h.data(), w.data(), znew.data(), zold.data(), 2.0, n, &pa, &ca);
    vx.dual_update(lam_b.data(), h.data(), w.data(), znew.data(), zold.data(), 2.0, n, &pb, &cb);
    CHECK(std::memcmp(lam_a.data(), lam_b.data(), n * sizeof(double)) == 0);
    CHECK(pa == doctest::Approx(pb).epsilon(1e-13));
    CHECK(ca == doctest::Approx(cb).epsilon(1e-13));

    CHECK(sc.sum(s.data(), n) == doctest::Approx(vx.sum(s.data(), n)).epsilon(1e-13));
    CHECK(sc.sum_sq_diff(w.data(), z.data(), n) ==
          doctest::Approx(vx.sum_sq_diff(w.data(), z.data(), n)).epsilon(1e-13));
  }
}

TEST_CASE("kernels compute what their contracts say") {
  const auto& k = kern::active_kernels();
  RngStream rng(22, 1);
  const size_t n = 37;
  const auto s = randvec(rng, n), eta = randvec(rng, n), gamma = randvec(rng, n);
  std::vector<double> t(n);
  k.fused_sub2(t.data(), s.data(), eta.data(), gamma.data(), 0.5, 2.0, n);
  for (size_t i = 0; i < n; ++i)
    CHECK(t[i] == doctest::Approx(s[i] - 0.5 * eta[i] - 2.0 * gamma[i]));

  const auto w = randvec(rng, n), z = randvec(rng, n);
  std::vector<double> h(n);
  k.relax_mix(h.data(), w.data(), z.data(), 1.5, n);
  for (size_t i = 0; i < n; ++i) CHECK(h[i] == doctest::Approx(1.5 * w[i] - 0.5 * z[i]));

  auto lam = randvec(rng, n);
  const auto lam0 = lam;
  const auto znew = randvec(rng, n), zold = randvec(rng, n);
  double prim = 0, chg = 0;
  k.dual_update(lam.data(), h.data(), w.data(), znew.data(), zold.data(), 3.0, n, &prim, &chg);
  double rp = 0, rc = 0;
  for (size_t i = 0; i < n; ++i) {
    CHECK(lam[i] == doctest::Approx(lam0[i] + 3.0 * (h[i] - znew[i])));
    rp += (w[i] - znew[i]) * (w[i] - znew[i]);
    rc += (znew[i] - zold[i]) * (znew[i] - zold[i]);
  }
  CHECK(prim == doctest::Approx(rp));
  CHECK(chg == doctest::Approx(rc));

  auto c = s;
  k.clip(c.data(), -0.5, 0.5, n);
  for (size_t i = 0; i < n; ++i) CHECK(c[i] == std::min(0.5, std::max(-0.5, s[i])));
}

TEST_CASE("runtime dispatch reports a backend") {
  const auto& k = kern::active_kernels();
  CHECK((std::string(k.name) == "scalar" || std::string(k.name) == "avx2"));
  if (have_avx2()) CHECK(std::string(kern::avx2_kernels().name) == "avx2");
}
