#include "nbldpc/decoder_lp.hpp"

#include <chrono>
#include <cstring>
#include <stdexcept>

#include "nbldpc/projections.hpp"
#include "nbldpc/relaxed_projection.hpp"
#include "nbldpc/simd_kernels.hpp"

namespace nbldpc {

const char* to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::codeword_early: return "CodewordEarly";
    case DecodeStatus::codeword_converged: return "CodewordConverged";
    case DecodeStatus::tolerance_reached: return "ToleranceReached";
    case DecodeStatus::fractional_at_tmax: return "FractionalAtTmax";
  }
  return "?";
}

void LpDecoderParams::validate() const {
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (rho < 1.0 || rho >= 2.0) throw std::invalid_argument("rho must be in [1, 2)");
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
}

LpDecoder::LpDecoder(const FieldCtx& ctx, const NonbinaryCode& code,
                     LpDecoderParams params)
    : ctx_(ctx), code_(code), prm_(params) {
  prm_.validate();
  if (ctx.q() != code.q) throw std::invalid_argument("field does not match code");
  cc_ = build_check_contexts(ctx, code, prm_.kind);
  n_ = code.n;
  q_ = ctx.q();
  len_ = symbol_len(prm_.kind, q_);

  zoff_.resize(code.mcheck + 1);
  size_t off = 0;
  for (int j = 0; j < code.mcheck; ++j) {
    zoff_[j] = off;
    off += size_t(q_ - 1) * cc_[j].dc;
  }
  zoff_[code.mcheck] = off;
  ztotal_ = off;

  int max_dv = 0;
  for (int d : code.var_degree) max_dv = std::max(max_dv, d);
  ca_.resize(max_dv + 1);
  cb_.resize(max_dv + 1);
  for (int d = 0; d <= max_dv; ++d) {
    auto pi = symmetric_pair_inverse(d * (q_ / 2.0) + 1.0, d * (q_ / 4.0), q_ - 1);
    ca_[d] = pi.a;
    cb_[d] = pi.b;
  }

  res_budget_ = double(ztotal_) + double(n_) * len_;
}

void LpDecoder::x_update(std::span<const double> llr) {
  const auto& K = kern::active_kernels();
  const double inv_mu = 1.0 / prm_.mu;
  K.fused_sub2(t_.data(), s_.data(), eta_.data(), llr.data(), inv_mu, inv_mu,
               t_.size());
  for (size_t j = 0; j < cc_.size(); ++j) {
    const CheckContext& cc = cc_[j];
    const double* zb = z_.data() + zoff_[j];
    const double* lb = lam_.data() + zoff_[j];
    const int gw = cc.gather_width;
    for (int slot = 0; slot < (q_ - 1) * cc.dc; ++slot) {
      double coef = zb[slot] - lb[slot] * inv_mu;
      const int32_t* idx = cc.gather.data() + size_t(slot) * gw;
      for (int t = 0; t < gw; ++t) t_[idx[t]] += coef;
    }
  }
  const bool cw = prm_.kind == EmbeddingKind::constant_weight;
  for (int i = 0; i < n_; ++i) {
    const double a = ca_[code_.var_degree[i]];
    const double b = cb_[code_.var_degree[i]];
    const double* tb = t_.data() + size_t(i) * len_;
    double* xb = x_.data() + size_t(i) * len_;
    int lo = 0;
    if (cw) {
      xb[0] = tb[0];  // element 0 joins no gather, so its row of Phi is zero
      lo = 1;
    }
    double sum = 0;
    for (int k = lo; k < len_; ++k) sum += tb[k];
    for (int k = lo; k < len_; ++k) xb[k] = (a - b) * tb[k] + b * sum;
  }
}

std::vector<int> LpDecoder::round_from_s() const {
  std::vector<int> out(n_);
  for (int i = 0; i < n_; ++i)
    out[i] = round_symbol(prm_.kind, q_, s_.data() + size_t(i) * len_);
  return out;
}

DecodeOutcome LpDecoder::decode(std::span<const double> llr) {
  if (llr.size() != size_t(n_) * len_) throw std::invalid_argument("llr size mismatch");
  auto t0 = std::chrono::steady_clock::now();
  const auto& K = kern::active_kernels();
  const double mu = prm_.mu, rho = prm_.rho, inv_mu = 1.0 / mu;

  const size_t sdim = size_t(n_) * len_;
  x_.assign(sdim, 0.0);
  t_.resize(sdim);
  s_.assign(sdim, 1.0 / q_);
  eta_.assign(sdim, 0.0);
  z_.assign(ztotal_, 1.0 / q_);
  lam_.assign(ztotal_, 0.0);

  static thread_local std::vector<double> wz, hz, vz, hs, vs;
  wz.resize(ztotal_);
  hz.resize(ztotal_);
  vz.resize(ztotal_);
  hs.resize(sdim);
  vs.resize(sdim);
  static thread_local ProjWorkspace pw;

  const double budget = prm_.eps * prm_.eps * res_budget_;
  DecodeOutcome out;

  auto finish = [&](bool converged, int iters) {
    out.word = round_from_s();
    out.syndrome = syndrome_ok(ctx_, code_, out.word);
    if (out.syndrome)
      out.status = DecodeStatus::codeword_converged;
    else
      out.status = converged ? DecodeStatus::tolerance_reached
                             : DecodeStatus::fractional_at_tmax;
    out.iterations = iters;
    out.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
  };

  for (int iter = 1; iter <= prm_.t_max; ++iter) {
    x_update(llr);

    double prim = 0, change = 0;

    for (size_t j = 0; j < cc_.size(); ++j) {
      const CheckContext& cc = cc_[j];
      double* w = wz.data() + zoff_[j];
      const int gw = cc.gather_width;
      for (int slot = 0; slot < (q_ - 1) * cc.dc; ++slot) {
        const int32_t* idx = cc.gather.data() + size_t(slot) * gw;
        double acc = 0;
        for (int t = 0; t < gw; ++t) acc += x_[idx[t]];
        w[slot] = acc;
      }
    }
    K.relax_mix(hz.data(), wz.data(), z_.data(), rho, ztotal_);
    K.fused_sub2(vz.data(), hz.data(), lam_.data(), lam_.data(), -inv_mu, 0.0,
                 ztotal_);
    for (size_t j = 0; j < cc_.size(); ++j) {
      const int dc = cc_[j].dc;
      for (int kappa = 0; kappa < q_ - 1; ++kappa)
        project_parity_polytope(
            std::span<double>(vz.data() + zoff_[j] + size_t(kappa) * dc, dc), pw);
    }
    K.dual_update(lam_.data(), hz.data(), wz.data(), vz.data(), z_.data(), mu,
                  ztotal_, &prim, &change);
    std::swap(z_, vz);

    K.relax_mix(hs.data(), x_.data(), s_.data(), rho, sdim);
    K.fused_sub2(vs.data(), hs.data(), eta_.data(), eta_.data(), -inv_mu, 0.0, sdim);
    if (prm_.kind == EmbeddingKind::constant_weight) {
      for (int i = 0; i < n_; ++i)
        project_simplex_sum_eq1(std::span<double>(vs.data() + size_t(i) * len_, len_),
                                pw);
    } else {
      for (int i = 0; i < n_; ++i)
        project_simplex_sum_le1(std::span<double>(vs.data() + size_t(i) * len_, len_),
                                pw);
    }
    K.dual_update(eta_.data(), hs.data(), x_.data(), vs.data(), s_.data(), mu, sdim,
                  &prim, &change);
    std::swap(s_, vs);

    if (trace_) trace_(iter, x_, s_);

    if (prim <= budget && change <= budget) return finish(true, iter);

    if (prm_.early_term) {
      std::vector<int> word = round_from_s();
      if (syndrome_ok(ctx_, code_, word)) {
        out.word = std::move(word);
        out.syndrome = true;
        out.status = DecodeStatus::codeword_early;
        out.iterations = iter;
        out.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return out;
      }
    }
  }
  return finish(false, prm_.t_max);
}

}  // namespace nbldpc
