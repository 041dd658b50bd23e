#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbldpc/channel.hpp"
#include "nbldpc/decoder_lp.hpp"
#include "nbldpc/decoder_penalized.hpp"
#include "nbldpc/oracle.hpp"
#include "nbldpc/projections.hpp"
#include "nbldpc/relaxed_projection.hpp"
#include "nbldpc/sim.hpp"

using namespace nbldpc;

namespace {

// every subcommand takes the same flags; values land as strings and are fed
// through the config-key setter so file and CLI share one parser and CLI wins
struct CliOpts {
  std::map<std::string, std::string> vals;
  std::string config_path;
  bool penalized_fast = false;

  void add_common(CLI::App* sc) {
    sc->add_option("--config", config_path, "key = value config file, CLI flags override");
    auto bind = [&](const char* flag, const char* key, const char* help) {
      sc->add_option_function<std::string>(
          flag, [this, key = std::string(key)](const std::string& v) { vals[key] = v; }, help);
    };
    bind("--code", "code", "code file");
    bind("--decoder", "decoder", "lp | penalized | penalized-fast");
    bind("--embedding", "embedding", "flanagan | cw (lp only; penalized is cw)");
    bind("--snr", "snr", "comma-separated Es/N0 list in dB");
    bind("--mu", "mu", "ADMM penalty");
    bind("--rho", "rho", "over-relaxation in [1,2)");
    bind("--alpha", "alpha", "penalty weight (penalized decoders)");
    bind("--tmax", "tmax", "outer iteration cap");
    bind("--eps", "eps", "outer stopping tolerance");
    bind("--trials", "trials", "trial count (cap when --min-word-errors is set)");
    bind("--min-word-errors", "min_word_errors", "stop a point after this many word errors");
    bind("--seed", "seed", "base seed; trial t draws from (seed, t) only");
    bind("--workers", "workers", "worker threads per point");
    bind("--out", "out", "output CSV path (default stdout)");
    bind("--timing", "timing", "off | measure (measure breaks CSV reproducibility)");
    sc->add_flag("--penalized-fast", penalized_fast, "shorthand for --decoder penalized-fast");
  }

  SimConfig build() const {
    SimConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const auto& [k, v] : vals) set_config_key(cfg, k, v);
    if (penalized_fast) cfg.decoder = DecoderSel::penalized_fast;
    return cfg;
  }
};

NonbinaryCode load_or_die(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("no code file given (--code)");
  return load_code(path);
}

void write_records(const SimConfig& cfg, const std::vector<SimRecord>& recs) {
  if (cfg.out_path.empty()) {
    write_csv(std::cout, recs);
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + cfg.out_path);
  write_csv(out, recs);
  if (!out.good()) throw std::runtime_error("write failed: " + cfg.out_path);
}

int cmd_decode(const CliOpts& opts) {
  SimConfig cfg = opts.build();
  const NonbinaryCode code = load_or_die(cfg.code_path);
  const FieldCtx ctx = FieldCtx::with_default_poly(code.field_m());
  const EmbeddingKind kind = cfg.decoder == DecoderSel::lp
                                 ? cfg.embedding
                                 : EmbeddingKind::constant_weight;
  const size_t want = size_t(code.n) * symbol_len(kind, code.q);
  std::vector<double> llr;
  llr.reserve(want);
  double v;
  while (std::cin >> v) llr.push_back(v);
  if (!std::cin.eof()) throw std::runtime_error("malformed value in the LLR stream");
  if (llr.size() != want)
    throw std::runtime_error("expected " + std::to_string(want) + " values, got " +
                             std::to_string(llr.size()));

  DecodeOutcome out;
  if (cfg.decoder == DecoderSel::lp) {
    LpDecoderParams p = cfg.lp;
    p.kind = kind;
    LpDecoder dec(ctx, code, p);
    out = dec.decode(llr);
  } else {
    PenalizedDecoder dec(ctx, code, cfg.pen);
    out = cfg.decoder == DecoderSel::penalized ? dec.decode(llr) : dec.decode_fast(llr);
  }
  std::cout << "status " << to_string(out.status) << "\n";
  std::cout << "iterations " << out.iterations << "\n";
  std::cout << "syndrome " << (out.syndrome ? "ok" : "fail") << "\n";
  std::cout << "word";
  for (int s : out.word) std::cout << ' ' << s;
  std::cout << "\n";
  return 0;
}

int cmd_sweep(const CliOpts& opts) {
  SimConfig cfg = opts.build();
  validate(cfg);
  const NonbinaryCode code = load_or_die(cfg.code_path);
  const FieldCtx ctx = FieldCtx::with_default_poly(code.field_m());
  write_records(cfg, run_sweep(ctx, code, cfg));
  return 0;
}

int cmd_param_sweep(const CliOpts& opts, const std::string& param, const std::string& grid) {
  SimConfig cfg = opts.build();
  validate(cfg);
  std::vector<double> vals;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) vals.push_back(std::stod(item));
  const NonbinaryCode code = load_or_die(cfg.code_path);
  const FieldCtx ctx = FieldCtx::with_default_poly(code.field_m());
  write_records(cfg, run_param_sweep(ctx, code, cfg, param, vals));
  return 0;
}

int cmd_conjecture(int d, int trials, uint64_t seed, double tol) {
  const auto rep = oracle::validate_conjecture_gf4(d, trials, seed);
  std::printf("d=%d trials=%d max_l2=%.3e mean_l2=%.3e tol=%.1e %s\n", d, rep.trials,
              rep.max_l2, rep.mean_l2, tol, rep.max_l2 <= tol ? "CONSISTENT" : "EXCEEDED");
  return 0;
}

int selftest_fail(const char* what) {
  std::fprintf(stderr, "selftest FAILED: %s\n", what);
  return 3;
}

int cmd_selftest() {
  // field tables
  {
    const FieldCtx f8 = FieldCtx::with_default_poly(3);
    const std::vector<int> want = {1, 2, 4, 3, 6, 7, 5};
    if (f8.exp_table() != want) return selftest_fail("GF(8) power table");
    if (f8.mul(4, 6) != 5) return selftest_fail("GF(8) product 4*6");
    const FieldCtx f4 = FieldCtx::with_default_poly(2);
    if (f4.exp_table() != std::vector<int>{1, 2, 3}) return selftest_fail("GF(4) power table");
    for (int m : {2, 3, 4}) {
      const FieldCtx f = FieldCtx::with_default_poly(m);
      for (int kappa = 1; kappa < f.q(); ++kappa)
        for (int h = 1; h < f.q(); ++h) {
          const auto& s = f.btilde_set(kappa, h);
          if (s.count() != f.q() / 2 || s.contains(0))
            return selftest_fail("bit-subset set size or zero membership");
        }
    }
  }
  // closed-form x-step against a dense solve
  for (int m : {2, 3}) {
    const FieldCtx f = FieldCtx::with_default_poly(m);
    for (auto kind : {EmbeddingKind::flanagan, EmbeddingKind::constant_weight}) {
      const int len = symbol_len(kind, f.q());
      const int dv = 3;
      RngStream rng(7, 0);
      std::vector<double> t(len);
      for (auto& x : t) x = 2 * rng.uniform01() - 1;
      const auto dense = oracle::dense_xupdate_oracle(f, kind, dv, t);
      const auto pi = symmetric_pair_inverse(dv * (f.q() / 2.0) + 1, dv * (f.q() / 4.0),
                                             f.q() - 1);
      double sum = 0;
      const int skip = kind == EmbeddingKind::constant_weight ? 1 : 0;
      for (int i = skip; i < len; ++i) sum += t[i];
      for (int i = skip; i < len; ++i) {
        const double closed = (pi.a - pi.b) * t[i] + pi.b * sum;
        if (std::abs(closed - dense[i]) > 1e-10) return selftest_fail("x-step closed form");
      }
      if (skip && std::abs(t[0] - dense[0]) > 1e-10)
        return selftest_fail("x-step zero-coordinate passthrough");
    }
  }
  // projections: simplex mass, parity polytope box and idempotence
  {
    RngStream rng(11, 1);
    ProjWorkspace ws;
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> v(6);
      for (auto& x : v) x = 3 * rng.uniform01() - 1;
      auto a = v;
      project_simplex_sum_eq1(a, ws);
      double s = 0;
      for (double x : a) s += x;
      if (std::abs(s - 1) > 1e-9) return selftest_fail("simplex mass");
      auto b = v;
      project_parity_polytope(b, ws);
      for (double x : b)
        if (x < -1e-12 || x > 1 + 1e-12) return selftest_fail("parity polytope box");
      auto c = b;
      project_parity_polytope(c, ws);
      for (size_t i = 0; i < c.size(); ++i)
        if (std::abs(c[i] - b[i]) > 1e-10) return selftest_fail("parity polytope idempotence");
    }
  }
  // rotated inner projection against the direct gather form
  {
    const FieldCtx f = FieldCtx::with_default_poly(2);
    RelaxedProjector proj(f, EmbeddingKind::constant_weight, 3, InnerParams{});
    RngStream rng(13, 2);
    const std::vector<int> h = {2, 3, 1};
    std::vector<double> v(12), a(12), b(12);
    for (int rep = 0; rep < 5; ++rep) {
      for (auto& x : v) x = 2 * rng.uniform01() - 1;
      InnerState s1, s2;
      proj.project_for_check(h, v, a, s1);
      proj.project_direct(h, v, b, s2);
      for (int i = 0; i < 12; ++i)
        if (std::abs(a[i] - b[i]) > 1e-6) return selftest_fail("rotation identity");
    }
  }
  // stream determinism
  {
    RngStream r1(42, 9), r2(42, 9);
    for (int i = 0; i < 100; ++i)
      if (r1.next_u64() != r2.next_u64()) return selftest_fail("stream determinism");
    RngStream r3(42, 10);
    bool same = true;
    RngStream r4(42, 9);
    for (int i = 0; i < 4; ++i) same = same && r3.next_u64() == r4.next_u64();
    if (same) return selftest_fail("stream separation");
  }
  std::printf("selftest OK\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-binary LDPC decoding over GF(2^m): ADMM LP and penalized decoders"};
  app.require_subcommand(1);

  CliOpts opts;
  auto* sc_decode = app.add_subcommand("decode", "decode one word, LLRs on stdin");
  opts.add_common(sc_decode);
  auto* sc_sweep = app.add_subcommand("sweep", "error-rate sweep over an SNR list");
  opts.add_common(sc_sweep);
  auto* sc_param = app.add_subcommand("param-sweep", "sweep mu, rho, or alpha on matched noise");
  opts.add_common(sc_param);
  std::string param, grid;
  sc_param->add_option("--param", param, "mu | rho | alpha")->required();
  sc_param->add_option("--grid", grid, "comma-separated values")->required();

  int cj_d = 3, cj_trials = 1000;
  uint64_t cj_seed = 1;
  double cj_tol = 1e-4;
  auto* sc_conj = app.add_subcommand(
      "conjecture", "compare the GF(4) single-check relaxation with the embedding hull");
  sc_conj->add_option("--d", cj_d, "check degree");
  sc_conj->add_option("--trials", cj_trials, "sample count");
  sc_conj->add_option("--seed", cj_seed, "seed");
  sc_conj->add_option("--tol", cj_tol, "gap threshold");

  auto* sc_self = app.add_subcommand("selftest", "fast internal cross-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sc_decode->parsed()) return cmd_decode(opts);
    if (sc_sweep->parsed()) return cmd_sweep(opts);
    if (sc_param->parsed()) return cmd_param_sweep(opts, param, grid);
    if (sc_conj->parsed()) return cmd_conjecture(cj_d, cj_trials, cj_seed, cj_tol);
    if (sc_self->parsed()) return cmd_selftest();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
