#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nbldpc/oracle.hpp"
#include "nbldpc/relaxed_projection.hpp"
#include "nbldpc/rng.hpp"

using namespace nbldpc;

namespace {

double l2(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> randvec(RngStream& rng, size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform01();
  return v;
}

InnerParams tight_inner() {
  InnerParams p;
  p.eps = 1e-8;
  p.t_max = 20000;
  return p;
}

}  // namespace

TEST_CASE("split projection agrees with the hull of codeword embeddings, GF(4) d=3") {
  // conv of the embedded single-check words equals the constraint set here, so
  // the iterative split projection must land on the hull projection
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const std::vector<int> ones = {1, 1, 1};
  const auto e = oracle::enumerate_spc(f, ones);
  RngStream rng(51, 0);
  for (auto kind : {EmbeddingKind::flanagan, EmbeddingKind::constant_weight}) {
    RelaxedProjector proj(f, kind, 3, tight_inner());
    const auto& verts = kind == EmbeddingKind::flanagan ? e.flanagan : e.cw;
    const int dim = 3 * symbol_len(kind, 4);
    for (int rep = 0; rep < 25; ++rep) {
      const auto v = randvec(rng, dim, -0.5, 1.5);
      std::vector<double> got(dim);
      InnerState st;
      const auto res = proj.project_normalized(v, got, st);
      CHECK(res.converged);
      const auto want = oracle::project_hull(verts, v);
      CHECK(l2(got, want) < 1e-4);
    }
  }
}

TEST_CASE("projection of a member point returns it") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const auto e = oracle::enumerate_spc(f, std::vector<int>{1, 1, 1});
  RelaxedProjector proj(f, EmbeddingKind::constant_weight, 3, tight_inner());
  for (const auto& vert : e.cw) {
    std::vector<double> got(vert.size());
    InnerState st;
    proj.project_normalized(vert, got, st);
    CHECK(l2(got, vert) < 1e-5);
  }
}

TEST_CASE("rotate-project-rotate equals the direct gather projection") {
  RngStream rng(52, 1);
  for (int m : {2, 3}) {
    const FieldCtx f = FieldCtx::with_default_poly(m);
    const int q = f.q();
    for (auto kind : {EmbeddingKind::flanagan, EmbeddingKind::constant_weight}) {
      RelaxedProjector proj(f, kind, 3, tight_inner());
      const int dim = 3 * symbol_len(kind, q);
      for (int rep = 0; rep < 15; ++rep) {
        std::vector<int> h(3);
        for (auto& x : h) x = 1 + int(rng.uniform01() * (q - 1));
        const auto v = randvec(rng, dim, -0.5, 1.5);
        std::vector<double> a(dim), b(dim);
        InnerState s1, s2;
        proj.project_for_check(h, v, a, s1);
        proj.project_direct(h, v, b, s2);
        CHECK(l2(a, b) < 1e-6);
      }
    }
  }
}

TEST_CASE("projected points satisfy the constraint family") {
  const FieldCtx f = FieldCtx::with_default_poly(3);
  RngStream rng(53, 2);
  RelaxedProjector proj(f, EmbeddingKind::constant_weight, 4, tight_inner());
  const int dim = 4 * 8;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<int> h(4);
    for (auto& x : h) x = 1 + int(rng.uniform01() * 7);
    const auto v = randvec(rng, dim, -1.0, 2.0);
    std::vector<double> out(dim);
    InnerState st;
    proj.project_for_check(h, v, out, st);
    CHECK(proj.feasibility_gap(h, out) < 1e-4);
  }
}

TEST_CASE("warm started repeat projections stay put and converge fast") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  RelaxedProjector proj(f, EmbeddingKind::constant_weight, 3, InnerParams{});
  RngStream rng(54, 3);
  const auto v = randvec(rng, 12, -0.5, 1.5);
  std::vector<double> first(12), second(12);
  InnerState st;
  const auto r1 = proj.project_normalized(v, first, st);
  const auto r2 = proj.project_normalized(v, second, st);
  CHECK(l2(first, second) < 1e-4);
  CHECK(r2.iters <= r1.iters);
}

TEST_CASE("iteration budget exhaustion is reported, not hidden") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  InnerParams starved;
  starved.t_max = 2;
  starved.eps = 1e-12;
  RelaxedProjector proj(f, EmbeddingKind::constant_weight, 3, starved);
  RngStream rng(55, 4);
  const auto v = randvec(rng, 12, -0.5, 1.5);
  std::vector<double> out(12);
  InnerState st;
  const auto res = proj.project_normalized(v, out, st);
  CHECK(!res.converged);
  CHECK(res.iters == 2);
}
