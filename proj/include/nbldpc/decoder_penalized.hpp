#pragma once
#include <functional>
#include <span>

#include "nbldpc/channel.hpp"
#include "nbldpc/code_model.hpp"
#include "nbldpc/decoder_common.hpp"
#include "nbldpc/gf2m.hpp"
#include "nbldpc/relaxed_projection.hpp"

namespace nbldpc {

struct PenalizedParams {
  double mu = 4.0;
  double rho = 1.5;
  int t_max = 100;
  double eps = 1e-5;
  double alpha = 0.6;
  bool early_term = true;
  InnerParams inner;

  void validate() const;  // parameter ranges; the degree condition needs the code
};

// ADMM on the penalized objective (LP cost minus alpha times the squared
// distance of each symbol block from uniform), constant-weight embedding only.
// The z-step projects each check's block onto the relaxed code polytope via
// the inner consensus ADMM, warm-started across outer iterations.
class PenalizedDecoder {
 public:
  PenalizedDecoder(const FieldCtx& ctx, const NonbinaryCode& code,
                   PenalizedParams params);

  // llr constant-weight flavor, length n * q
  DecodeOutcome decode(std::span<const double> llr);

  // factor split of the penalized objective along the per-(check, bit-subset)
  // parity polytopes, as in the LP decoder. Faster per iteration but the
  // codeword-independence guarantee of the relaxed-polytope form does not
  // carry over. Requires alpha < mu/2.
  DecodeOutcome decode_fast(std::span<const double> llr);

  // decode passes (x, z, lambda); decode_fast passes (x, s, eta), its simplex
  // replica and dual, since it keeps no polytope-form z
  using TraceFn = std::function<void(int iter, std::span<const double> x,
                                     std::span<const double> z,
                                     std::span<const double> lam)>;
  void set_trace(TraceFn fn) { trace_ = std::move(fn); }

  const PenalizedParams& params() const { return prm_; }
  std::vector<int> round_from_x() const;

  // flat z/lambda layout: check j occupies [zoff(j), zoff(j+1)), dc(j) blocks of q
  size_t zoff(int j) const { return zoff_[j]; }

 private:
  const FieldCtx& ctx_;
  const NonbinaryCode& code_;
  PenalizedParams prm_;
  int n_, q_;
  size_t ztotal_;
  std::vector<size_t> zoff_;
  std::vector<int> proj_of_check_;       // index into projs_ by check degree
  std::vector<RelaxedProjector> projs_;  // one per distinct degree
  std::vector<InnerState> istate_;       // warm-start state per check

  std::vector<double> x_, t_, z_, lam_;
  TraceFn trace_;

  // fast-variant machinery, built on first use
  std::vector<CheckContext> cc_fast_;
  std::vector<size_t> zoff_fast_;
  size_t ztotal_fast_ = 0;
  std::vector<double> fa_, fb_;
  double f0_ = 0;
};

// Runs the penalized decoder on y and on the per-symbol tau_c image of y and
// asserts iterate-by-iterate that the two runs differ exactly by the relative
// index shift of c, to tol. break_tau applies a deliberately wrong shift and
// must make the harness fail. Early termination and the residual stop are
// disabled so both runs execute params.t_max iterations.
bool symmetry_harness(const FieldCtx& ctx, const NonbinaryCode& code,
                      const Modulation& mod, const RelativeIsometry& iso,
                      std::span<const int> c, std::span<const double> y_iq,
                      double sigma, PenalizedParams params, double tol,
                      bool break_tau = false, double* max_discrepancy = nullptr);

}  // namespace nbldpc
