#include <stdexcept>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "nbldpc/channel.hpp"
#include "nbldpc/decoder_lp.hpp"
#include "nbldpc/decoder_penalized.hpp"
#include "nbldpc/rng.hpp"

using namespace nbldpc;

namespace {

const char* kToy = R"(4 2 4
2 4
2 1 2 2
4 3
1:1 2:2
1:2
1:2 2:1
1:3 2:2
1:1 2:2 3:2 4:3
1:2 3:1 4:2
)";

NonbinaryCode toy_code() {
  const auto path = std::filesystem::temp_directory_path() / "pen_toy.code";
  std::ofstream f(path);
  f << kToy;
  f.close();
  return load_code(path.string());
}

std::vector<double> cw_llr(const FieldCtx& f, std::span<const int> word, double sigma,
                           double noise_sigma, uint64_t seed) {
  const Modulation mod = make_qpsk(f);
  std::vector<double> iq;
  RngStream rng(seed, 0);
  transmit(mod, word, noise_sigma, rng, iq);
  std::vector<double> llr(word.size() * 4);
  for (size_t i = 0; i < word.size(); ++i)
    llr_point(mod, iq[2 * i], iq[2 * i + 1], sigma, EmbeddingKind::constant_weight,
              &llr[i * 4]);
  return llr;
}

}  // namespace

TEST_CASE("noiseless words decode exactly, both variants") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const NonbinaryCode code = toy_code();
  PenalizedDecoder dec(f, code, PenalizedParams{});
  for (int w = 0; w < 256; ++w) {
    const std::vector<int> word = {w & 3, (w >> 2) & 3, (w >> 4) & 3, (w >> 6) & 3};
    if (!syndrome_ok(f, code, word)) continue;
    const auto llr = cw_llr(f, word, 0.4, 0.0, 1);
    const auto a = dec.decode(llr);
    CHECK(a.word == word);
    CHECK(a.syndrome);
    const auto b = dec.decode_fast(llr);
    CHECK(b.word == word);
    CHECK(b.syndrome);
  }
}

TEST_CASE("construction rejects a penalty too strong for the degree profile") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const NonbinaryCode code = toy_code();  // has a degree-1 symbol
  PenalizedParams p;
  p.alpha = 2.5;  // d - 2 alpha / mu = 1 - 1.25 < 0
  p.mu = 4.0;
  CHECK_THROWS_AS(PenalizedDecoder(f, code, p), std::invalid_argument);
}

TEST_CASE("factor-split variant needs alpha below mu over two") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  // all degrees 2, so the polytope-form degree condition passes where the
  // factor-split guard must still fire
  const char* kReg = "3 2 4\n2 3\n2 2 2\n3 3\n1:1 2:2\n1:1 2:3\n1:1 2:1\n1:1 2:1 3:1\n1:2 2:3 3:1\n";
  const auto path = std::filesystem::temp_directory_path() / "pen_reg.code";
  std::ofstream out(path);
  out << kReg;
  out.close();
  const NonbinaryCode code = load_code(path.string());

  PenalizedParams p;
  p.mu = 1.0;
  p.alpha = 0.5;  // 2 alpha == mu, but 2 - 2*0.5/1 = 1 > 0
  PenalizedDecoder dec(f, code, p);
  const auto llr = cw_llr(f, std::vector<int>{0, 0, 0}, 0.4, 0.0, 1);
  CHECK_NOTHROW(dec.decode(llr));
  CHECK_THROWS_AS(dec.decode_fast(llr), std::invalid_argument);
}

TEST_CASE("vanishing penalty reproduces the plain splitting") {
  // with alpha -> 0 the fast variant and the constant-weight LP decoder run the
  // same recursion; their iterates must agree to rounding noise
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const NonbinaryCode code = toy_code();

  PenalizedParams pp;
  pp.alpha = 1e-12;
  pp.mu = 2.0;
  pp.rho = 1.9;
  pp.t_max = 40;
  pp.eps = 1e-5;
  pp.early_term = false;
  PenalizedDecoder pen(f, code, pp);

  LpDecoderParams lp;
  lp.kind = EmbeddingKind::constant_weight;
  lp.mu = 2.0;
  lp.rho = 1.9;
  lp.t_max = 40;
  lp.eps = 1e-5;
  lp.early_term = false;
  LpDecoder ref(f, code, lp);

  const auto llr = cw_llr(f, std::vector<int>{1, 2, 0, 3}, 0.5, 0.45, 9);
  std::vector<std::vector<double>> pen_x;
  pen.set_trace([&](int, std::span<const double> x, std::span<const double>,
                    std::span<const double>) { pen_x.emplace_back(x.begin(), x.end()); });
  const auto a = pen.decode_fast(llr);
  std::vector<std::vector<double>> lp_x;
  ref.set_trace([&](int, std::span<const double> x, std::span<const double>) {
    lp_x.emplace_back(x.begin(), x.end());
  });
  const auto b = ref.decode(llr);
  CHECK(a.word == b.word);
  CHECK(a.iterations == b.iterations);
  REQUIRE(pen_x.size() == lp_x.size());
  for (size_t it = 0; it < pen_x.size(); ++it)
    for (size_t i = 0; i < pen_x[it].size(); ++i)
      CHECK(pen_x[it][i] == doctest::Approx(lp_x[it][i]).epsilon(1e-8));
}

TEST_CASE("starved inner iterations surface in the outcome") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const NonbinaryCode code = toy_code();
  PenalizedParams p;
  p.inner.t_max = 1;
  p.t_max = 5;
  p.early_term = false;
  PenalizedDecoder dec(f, code, p);
  const auto out = dec.decode(cw_llr(f, std::vector<int>{1, 2, 0, 3}, 0.5, 0.5, 3));
  CHECK(out.degraded_inner > 0);
}

TEST_CASE("symbol relabeling equivariance on the toy code") {
  const FieldCtx f = FieldCtx::with_default_poly(2);
  const NonbinaryCode code = toy_code();
  const Modulation mod = make_qpsk(f);
  const RelativeIsometry iso = make_relative_isometries(mod);
  REQUIRE(iso.group_compatible);

  PenalizedParams p;
  p.t_max = 25;
  p.inner.eps = 1e-13;
  p.inner.t_max = 50000;

  const double sigma = 0.6;
  int checked = 0;
  for (int w = 0; w < 256 && checked < 3; ++w) {
    const std::vector<int> word = {w & 3, (w >> 2) & 3, (w >> 4) & 3, (w >> 6) & 3};
    if (!syndrome_ok(f, code, word) || word == std::vector<int>{0, 0, 0, 0}) continue;
    ++checked;
    RngStream rng = trial_stream(91, checked);
    std::vector<double> iq;
    transmit(mod, std::vector<int>{0, 0, 0, 0}, sigma, rng, iq);
    double worst = 0;
    CHECK(symmetry_harness(f, code, mod, iso, word, iq, sigma, p, 1e-9, false, &worst));
    CHECK(worst < 1e-9);
    // a wrong relabeling must be caught
    CHECK(!symmetry_harness(f, code, mod, iso, word, iq, sigma, p, 1e-9, true));
  }
  CHECK(checked == 3);
}

TEST_CASE("parameter validation") {
  PenalizedParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 0.0;
  CHECK_NOTHROW(p.validate());  // zero penalty is legal, just pointless
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.rho = 2.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.inner.t_max = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
