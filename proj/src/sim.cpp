#include "nbldpc/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nbldpc/channel.hpp"
#include "nbldpc/decoder_lp.hpp"

namespace nbldpc {

const char* to_string(DecoderSel d) {
  switch (d) {
    case DecoderSel::lp: return "lp";
    case DecoderSel::penalized: return "penalized";
    case DecoderSel::penalized_fast: return "penalized-fast";
  }
  return "?";
}

static const char* kind_name(EmbeddingKind k) {
  return k == EmbeddingKind::flanagan ? "flanagan" : "cw";
}

void validate(const SimConfig& cfg) {
  if (cfg.code_path.empty()) throw std::invalid_argument("no code file given");
  if (cfg.snr_db.empty()) throw std::invalid_argument("no SNR points given");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.min_word_errors < 0) throw std::invalid_argument("min_word_errors must be >= 0");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (cfg.decoder == DecoderSel::lp) {
    LpDecoderParams p = cfg.lp;
    p.kind = cfg.embedding;
    p.validate();
  } else {
    if (cfg.embedding_explicit && cfg.embedding == EmbeddingKind::flanagan)
      throw std::invalid_argument("penalized decoding uses the constant-weight embedding");
    cfg.pen.validate();
  }
}

static int gfq_rank(const FieldCtx& ctx, const NonbinaryCode& code) {
  const int m = code.mcheck, n = code.n;
  std::vector<int> a(size_t(m) * n, 0);
  for (int r = 0; r < m; ++r)
    for (const auto& e : code.rows[r]) a[size_t(r) * n + e.col] = e.val;
  int rank = 0;
  for (int c = 0; c < n && rank < m; ++c) {
    int piv = -1;
    for (int r = rank; r < m; ++r)
      if (a[size_t(r) * n + c]) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = c; j < n; ++j)
        std::swap(a[size_t(piv) * n + j], a[size_t(rank) * n + j]);
    const int inv = ctx.div(1, a[size_t(rank) * n + c]);
    for (int j = c; j < n; ++j)
      a[size_t(rank) * n + j] = ctx.mul(inv, a[size_t(rank) * n + j]);
    for (int r = 0; r < m; ++r) {
      if (r == rank) continue;
      const int f = a[size_t(r) * n + c];
      if (!f) continue;
      for (int j = c; j < n; ++j)
        a[size_t(r) * n + j] ^= ctx.mul(f, a[size_t(rank) * n + j]);
    }
    ++rank;
  }
  return rank;
}

double code_rate(const FieldCtx& ctx, const NonbinaryCode& code) {
  const int k = code.n - gfq_rank(ctx, code);
  if (k <= 0) throw std::invalid_argument("code has dimension 0");
  return double(k) / code.n;
}

namespace {

struct TrialSlot {
  int32_t iters = 0;
  int32_t sym_errs = 0;
  int32_t degraded = 0;
  double ms = 0;
  uint8_t word_err = 0;
  uint8_t early = 0;
};

}  // namespace

SimRecord run_point(const FieldCtx& ctx, const NonbinaryCode& code,
                    const SimConfig& cfg, double snr_db) {
  validate(cfg);
  const Modulation mod = make_modulation(ctx);
  const double sigma = sigma_from_esn0(snr_db, code_rate(ctx, code));
  const EmbeddingKind kind =
      cfg.decoder == DecoderSel::lp ? cfg.embedding : EmbeddingKind::constant_weight;
  const int n = code.n;
  const int len = symbol_len(kind, code.q);
  const std::vector<int> zeros(n, 0);

  const int nw = std::min<long>(cfg.workers, 512);
  std::vector<std::unique_ptr<LpDecoder>> lp_dec;
  std::vector<std::unique_ptr<PenalizedDecoder>> pen_dec;
  if (cfg.decoder == DecoderSel::lp) {
    LpDecoderParams p = cfg.lp;
    p.kind = cfg.embedding;
    for (int w = 0; w < nw; ++w)
      lp_dec.push_back(std::make_unique<LpDecoder>(ctx, code, p));
  } else {
    for (int w = 0; w < nw; ++w)
      pen_dec.push_back(std::make_unique<PenalizedDecoder>(ctx, code, cfg.pen));
  }

  const bool error_mode = cfg.min_word_errors > 0;
  const long cap = cfg.trials;
  constexpr long kBatch = 512;

  std::vector<TrialSlot> slots(kBatch);
  long done = 0, word_errors = 0, symbol_errors = 0;
  long early_count = 0, degraded_count = 0;
  long iters_total = 0, iters_ok = 0, iters_bad = 0, n_ok = 0, n_bad = 0;
  double ms_total = 0, ms_ok = 0, ms_bad = 0;

  auto run_trials = [&](int w, long lo, long hi) {
    std::vector<double> iq, llr(size_t(n) * len);
    for (long t = lo + w; t < hi; t += nw) {
      RngStream rng = trial_stream(cfg.seed, uint64_t(t), StreamPurpose::channel_noise);
      transmit(mod, zeros, sigma, rng, iq);
      for (int i = 0; i < n; ++i)
        llr_point(mod, iq[2 * i], iq[2 * i + 1], sigma, kind, &llr[size_t(i) * len]);
      const auto t0 = std::chrono::steady_clock::now();
      DecodeOutcome out;
      if (cfg.decoder == DecoderSel::lp)
        out = lp_dec[w]->decode(llr);
      else if (cfg.decoder == DecoderSel::penalized)
        out = pen_dec[w]->decode(llr);
      else
        out = pen_dec[w]->decode_fast(llr);
      TrialSlot& s = slots[t - lo];
      if (cfg.timing) {
        const auto t1 = std::chrono::steady_clock::now();
        s.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      } else {
        s.ms = 0;
      }
      int se = 0;
      for (int i = 0; i < n; ++i) se += out.word[i] != 0;
      s.sym_errs = se;
      s.word_err = se > 0;
      s.iters = out.iterations;
      s.early = out.status == DecodeStatus::codeword_early;
      s.degraded = out.degraded_inner;
    }
  };

  while (done < cap) {
    const long bn = std::min(kBatch, cap - done);
    if (nw == 1) {
      run_trials(0, done, done + bn);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errs(nw);
      for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
          try {
            run_trials(w, done, done + bn);
          } catch (...) {
            errs[w] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    }
    // aggregate in trial order so the record is independent of worker count
    for (long i = 0; i < bn; ++i) {
      const TrialSlot& s = slots[i];
      iters_total += s.iters;
      ms_total += s.ms;
      early_count += s.early;
      degraded_count += s.degraded;
      symbol_errors += s.sym_errs;
      if (s.word_err) {
        ++word_errors;
        ++n_bad;
        iters_bad += s.iters;
        ms_bad += s.ms;
      } else {
        ++n_ok;
        iters_ok += s.iters;
        ms_ok += s.ms;
      }
    }
    done += bn;
    if (error_mode && word_errors >= cfg.min_word_errors) break;
  }

  SimRecord r;
  r.snr_db = snr_db;
  r.trials = done;
  r.word_errors = word_errors;
  r.symbol_errors = symbol_errors;
  r.wer = double(word_errors) / done;
  r.ser = double(symbol_errors) / (double(done) * n);
  r.iters_mean = double(iters_total) / done;
  r.iters_mean_correct = n_ok ? double(iters_ok) / n_ok : 0.0;
  r.iters_mean_error = n_bad ? double(iters_bad) / n_bad : 0.0;
  r.time_ms_mean = ms_total / done;
  r.time_ms_mean_correct = n_ok ? ms_ok / n_ok : 0.0;
  r.time_ms_mean_error = n_bad ? ms_bad / n_bad : 0.0;
  r.early_term_count = early_count;
  r.degraded_inner_count = degraded_count;
  r.seed = cfg.seed;
  r.decoder = to_string(cfg.decoder);
  r.embedding = kind_name(kind);
  r.code = cfg.code_name.empty() ? cfg.code_path : cfg.code_name;
  if (cfg.decoder == DecoderSel::lp) {
    r.mu = cfg.lp.mu;
    r.rho = cfg.lp.rho;
    r.alpha = 0;
    r.tmax = cfg.lp.t_max;
    r.eps = cfg.lp.eps;
  } else {
    r.mu = cfg.pen.mu;
    r.rho = cfg.pen.rho;
    r.alpha = cfg.pen.alpha;
    r.tmax = cfg.pen.t_max;
    r.eps = cfg.pen.eps;
  }
  return r;
}

std::vector<SimRecord> run_sweep(const FieldCtx& ctx, const NonbinaryCode& code,
                                 const SimConfig& cfg) {
  std::vector<SimRecord> out;
  for (double snr : cfg.snr_db) out.push_back(run_point(ctx, code, cfg, snr));
  return out;
}

std::vector<SimRecord> run_param_sweep(const FieldCtx& ctx, const NonbinaryCode& code,
                                       const SimConfig& cfg, const std::string& param,
                                       const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  std::vector<SimRecord> out;
  for (double v : grid) {
    SimConfig c = cfg;
    if (param == "mu") {
      c.lp.mu = v;
      c.pen.mu = v;
    } else if (param == "rho") {
      c.lp.rho = v;
      c.pen.rho = v;
    } else if (param == "alpha") {
      if (c.decoder == DecoderSel::lp)
        throw std::invalid_argument("alpha grid needs a penalized decoder");
      c.pen.alpha = v;
    } else {
      throw std::invalid_argument("unknown sweep parameter: " + param);
    }
    auto rec = run_sweep(ctx, code, c);
    out.insert(out.end(), rec.begin(), rec.end());
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<SimRecord>& records) {
  os << "snr_db,trials,word_errors,symbol_errors,wer,ser,"
        "iters_mean,iters_mean_correct,iters_mean_error,"
        "time_ms_mean,time_ms_mean_correct,time_ms_mean_error,"
        "early_term_count,degraded_inner_count,seed,"
        "decoder,embedding,mu,rho,alpha,tmax,eps,code\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%.3f,%ld,%ld,%ld,%.9e,%.9e,%.4f,%.4f,%.4f,%.3f,%.3f,%.3f,%ld,%ld,%llu,",
                  r.snr_db, r.trials, r.word_errors, r.symbol_errors, r.wer, r.ser,
                  r.iters_mean, r.iters_mean_correct, r.iters_mean_error, r.time_ms_mean,
                  r.time_ms_mean_correct, r.time_ms_mean_error, r.early_term_count,
                  r.degraded_inner_count, (unsigned long long)r.seed);
    os << buf;
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6g,%.6g,%.6g,%d,%.6g,%s\n",
                  r.decoder.c_str(), r.embedding.c_str(), r.mu, r.rho, r.alpha, r.tmax,
                  r.eps, r.code.c_str());
    os << buf;
  }
}

}  // namespace nbldpc
