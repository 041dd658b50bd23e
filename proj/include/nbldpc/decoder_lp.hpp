#pragma once
#include <functional>
#include <span>

#include "nbldpc/code_model.hpp"
#include "nbldpc/decoder_common.hpp"
#include "nbldpc/gf2m.hpp"

namespace nbldpc {

// ADMM LP decoding with the factor split into per-(check, bit-subset) parity
// polytopes and per-symbol simplexes. The quadratic x-step is the closed-form
// pair inverse of (d_v Phi + I); t assembly and the z/s passes are linear in
// the number of gathered coordinates.
class LpDecoder {
 public:
  LpDecoder(const FieldCtx& ctx, const NonbinaryCode& code, LpDecoderParams params);

  // llr flat symbol-major, length n * symbol_len. Reentrant per instance: one
  // instance per in-flight decode, shared ctx/code are read-only.
  DecodeOutcome decode(std::span<const double> llr);

  // called after each iteration's dual updates with the current x
  using TraceFn = std::function<void(int iter, std::span<const double> x,
                                     std::span<const double> s)>;
  void set_trace(TraceFn fn) { trace_ = std::move(fn); }

  const LpDecoderParams& params() const { return prm_; }
  const std::vector<CheckContext>& contexts() const { return cc_; }

  // current s iterate rounded to a hard word (early-termination rule)
  std::vector<int> round_from_s() const;

  std::span<const double> x() const { return x_; }
  std::span<const double> s() const { return s_; }

 private:
  void x_update(std::span<const double> llr);

  const FieldCtx& ctx_;
  const NonbinaryCode& code_;
  LpDecoderParams prm_;
  std::vector<CheckContext> cc_;
  int n_, q_, len_;
  size_t ztotal_;
  std::vector<size_t> zoff_;   // start of check j's (q-1) x dc(j) block
  std::vector<double> ca_, cb_;  // closed-form constants per variable degree
  double res_budget_;            // squared-residual budget at eps = 1

  std::vector<double> x_, s_, eta_, t_, z_, lam_;
  TraceFn trace_;
};

}  // namespace nbldpc
