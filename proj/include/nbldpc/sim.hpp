#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbldpc/code_model.hpp"
#include "nbldpc/decoder_common.hpp"
#include "nbldpc/decoder_penalized.hpp"

namespace nbldpc {

enum class DecoderSel { lp, penalized, penalized_fast };

const char* to_string(DecoderSel d);

struct SimConfig {
  std::string code_path;
  std::string code_name;  // CSV echo; defaults to the file stem
  DecoderSel decoder = DecoderSel::lp;
  EmbeddingKind embedding = EmbeddingKind::flanagan;
  bool embedding_explicit = false;  // penalized rejects an explicit flanagan request
  LpDecoderParams lp;
  PenalizedParams pen;
  std::vector<double> snr_db;
  int trials = 1000;          // fixed trial count, and the cap when stopping on errors
  int min_word_errors = 0;    // > 0: run whole batches until this many word errors
  uint64_t seed = 1;
  int workers = 1;
  bool timing = false;        // off keeps the time columns at zero for byte-stable CSV
  std::string out_path;       // empty writes to stdout
};

struct SimRecord {
  double snr_db = 0;
  long trials = 0, word_errors = 0, symbol_errors = 0;
  double wer = 0, ser = 0;
  double iters_mean = 0, iters_mean_correct = 0, iters_mean_error = 0;
  double time_ms_mean = 0, time_ms_mean_correct = 0, time_ms_mean_error = 0;
  long early_term_count = 0, degraded_inner_count = 0;
  uint64_t seed = 0;
  // param echo
  std::string decoder, embedding, code;
  double mu = 0, rho = 0, alpha = 0, eps = 0;
  int tmax = 0;
};

// config-level validation beyond the decoder params (decoder/embedding pairing,
// trial policy sanity); throws std::invalid_argument
void validate(const SimConfig& cfg);

double code_rate(const FieldCtx& ctx, const NonbinaryCode& code);

// One SNR point. Trials run in whole batches of 512; trial t's noise stream
// depends only on (seed, t), so grids over params or decoders see identical
// noise, and results land in per-trial slots aggregated in trial order, so the
// record does not depend on the worker count. Transmits the all-zeros word.
SimRecord run_point(const FieldCtx& ctx, const NonbinaryCode& code,
                    const SimConfig& cfg, double snr_db);

std::vector<SimRecord> run_sweep(const FieldCtx& ctx, const NonbinaryCode& code,
                                 const SimConfig& cfg);

// grid over one of mu | rho | alpha, matched noise across grid points
std::vector<SimRecord> run_param_sweep(const FieldCtx& ctx, const NonbinaryCode& code,
                                       const SimConfig& cfg, const std::string& param,
                                       const std::vector<double>& grid);

void write_csv(std::ostream& os, const std::vector<SimRecord>& records);

// flat key = value file with optional [lp] / [penalized] sections
void load_config_file(SimConfig& cfg, const std::string& path);
void set_config_key(SimConfig& cfg, const std::string& key, const std::string& value);

}  // namespace nbldpc
