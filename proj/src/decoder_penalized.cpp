#include "nbldpc/decoder_penalized.hpp"

#include <chrono>
#include <cstring>
#include <map>
#include <stdexcept>

#include "nbldpc/projections.hpp"
#include "nbldpc/simd_kernels.hpp"

namespace nbldpc {

void PenalizedParams::validate() const {
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (rho < 1.0 || rho >= 2.0) throw std::invalid_argument("rho must be in [1, 2)");
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  if (inner.mu <= 0 || inner.eps <= 0 || inner.t_max < 1)
    throw std::invalid_argument("bad inner projection parameters");
}

PenalizedDecoder::PenalizedDecoder(const FieldCtx& ctx, const NonbinaryCode& code,
                                   PenalizedParams params)
    : ctx_(ctx), code_(code), prm_(params) {
  prm_.validate();
  if (ctx.q() != code.q) throw std::invalid_argument("field does not match code");
  n_ = code.n;
  q_ = ctx.q();
  for (int i = 0; i < n_; ++i)
    if (code.var_degree[i] - 2.0 * prm_.alpha / prm_.mu <= 0.0)
      throw std::invalid_argument("variable degree too small for alpha/mu");

  zoff_.resize(code.mcheck + 1);
  size_t off = 0;
  std::map<int, int> by_deg;
  proj_of_check_.resize(code.mcheck);
  for (int j = 0; j < code.mcheck; ++j) {
    zoff_[j] = off;
    off += size_t(q_) * code.check_degree[j];
    auto it = by_deg.find(code.check_degree[j]);
    if (it == by_deg.end()) {
      by_deg.emplace(code.check_degree[j], int(projs_.size()));
      proj_of_check_[j] = int(projs_.size());
      projs_.emplace_back(ctx, EmbeddingKind::constant_weight, code.check_degree[j],
                          prm_.inner);
    } else {
      proj_of_check_[j] = it->second;
    }
  }
  zoff_[code.mcheck] = off;
  ztotal_ = off;
  istate_.resize(code.mcheck);
}

std::vector<int> PenalizedDecoder::round_from_x() const {
  std::vector<int> out(n_);
  for (int i = 0; i < n_; ++i)
    out[i] = round_symbol(EmbeddingKind::constant_weight, q_,
                          x_.data() + size_t(i) * q_);
  return out;
}

DecodeOutcome PenalizedDecoder::decode(std::span<const double> llr) {
  if (llr.size() != size_t(n_) * q_) throw std::invalid_argument("llr size mismatch");
  auto t0 = std::chrono::steady_clock::now();
  const auto& K = kern::active_kernels();
  const double mu = prm_.mu, rho = prm_.rho, inv_mu = 1.0 / mu;

  x_.assign(size_t(n_) * q_, 0.0);
  t_.resize(size_t(n_) * q_);
  z_.assign(ztotal_, 0.5);
  lam_.assign(ztotal_, 0.0);
  for (auto& st : istate_) st.reset();

  int max_dc = 0;
  for (int j = 0; j < code_.mcheck; ++j) max_dc = std::max(max_dc, code_.check_degree[j]);
  static thread_local std::vector<double> pjx, hj, vj, znew;
  pjx.resize(size_t(max_dc) * q_);
  hj.resize(size_t(max_dc) * q_);
  vj.resize(size_t(max_dc) * q_);
  znew.resize(size_t(max_dc) * q_);
  static thread_local ProjWorkspace pw;

  double dc_sum = 0;
  for (int j = 0; j < code_.mcheck; ++j) dc_sum += code_.check_degree[j];
  const double budget = prm_.eps * prm_.eps * q_ * dc_sum;

  DecodeOutcome out;
  auto finish = [&](bool converged, int iters) {
    out.word = round_from_x();
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
    // x-update: block-diagonal quadratic solve then simplex projection
    K.affine(t_.data(), llr.data(), -inv_mu, -2.0 * prm_.alpha * inv_mu / q_,
             t_.size());
    for (int j = 0; j < code_.mcheck; ++j) {
      const double* zb = z_.data() + zoff_[j];
      const double* lb = lam_.data() + zoff_[j];
      for (int p = 0; p < code_.check_degree[j]; ++p) {
        double* dst = t_.data() + size_t(code_.rows[j][p].col) * q_;
        const double* zp = zb + size_t(p) * q_;
        const double* lp = lb + size_t(p) * q_;
        for (int a = 0; a < q_; ++a) dst[a] += zp[a] - lp[a] * inv_mu;
      }
    }
    for (int i = 0; i < n_; ++i) {
      double scale = 1.0 / (code_.var_degree[i] - 2.0 * prm_.alpha * inv_mu);
      double* xb = x_.data() + size_t(i) * q_;
      const double* tb = t_.data() + size_t(i) * q_;
      for (int a = 0; a < q_; ++a) xb[a] = scale * tb[a];
      project_simplex_sum_eq1(std::span<double>(xb, q_), pw);
    }

    double prim = 0, change = 0;
    for (int j = 0; j < code_.mcheck; ++j) {
      const int dim = code_.check_degree[j] * q_;
      for (int p = 0; p < code_.check_degree[j]; ++p)
        std::memcpy(pjx.data() + size_t(p) * q_,
                    x_.data() + size_t(code_.rows[j][p].col) * q_,
                    sizeof(double) * q_);
      double* zb = z_.data() + zoff_[j];
      double* lb = lam_.data() + zoff_[j];
      K.relax_mix(hj.data(), pjx.data(), zb, rho, dim);
      K.fused_sub2(vj.data(), hj.data(), lb, lb, -inv_mu, 0.0, dim);

      static thread_local std::vector<int> hvals;
      hvals.resize(code_.check_degree[j]);
      for (int p = 0; p < code_.check_degree[j]; ++p) hvals[p] = code_.rows[j][p].val;
      InnerResult ir = projs_[proj_of_check_[j]].project_for_check(
          hvals, std::span<const double>(vj.data(), dim),
          std::span<double>(znew.data(), dim), istate_[j]);
      if (!ir.converged) ++out.degraded_inner;

      K.dual_update(lb, hj.data(), pjx.data(), znew.data(), zb, mu, dim, &prim,
                    &change);
      std::memcpy(zb, znew.data(), sizeof(double) * dim);
    }

    if (trace_) trace_(iter, x_, z_, lam_);

    if (prim <= budget && change <= budget) return finish(true, iter);

    if (prm_.early_term) {
      std::vector<int> word = round_from_x();
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

DecodeOutcome PenalizedDecoder::decode_fast(std::span<const double> llr) {
  if (llr.size() != size_t(n_) * q_) throw std::invalid_argument("llr size mismatch");
  if (2.0 * prm_.alpha >= prm_.mu)
    throw std::invalid_argument("fast variant needs alpha < mu/2");
  auto t0 = std::chrono::steady_clock::now();
  const auto& K = kern::active_kernels();
  const double mu = prm_.mu, rho = prm_.rho, inv_mu = 1.0 / mu;
  const double shift = 2.0 * prm_.alpha * inv_mu;

  if (cc_fast_.empty()) {
    cc_fast_ = build_check_contexts(ctx_, code_, EmbeddingKind::constant_weight);
    zoff_fast_.resize(code_.mcheck + 1);
    size_t off = 0;
    for (int j = 0; j < code_.mcheck; ++j) {
      zoff_fast_[j] = off;
      off += size_t(q_ - 1) * cc_fast_[j].dc;
    }
    zoff_fast_[code_.mcheck] = off;
    ztotal_fast_ = off;
    int max_dv = 0;
    for (int d : code_.var_degree) max_dv = std::max(max_dv, d);
    fa_.resize(max_dv + 1);
    fb_.resize(max_dv + 1);
    for (int d = 0; d <= max_dv; ++d) {
      auto pi = symmetric_pair_inverse(d * (q_ / 2.0) + 1.0 - shift, d * (q_ / 4.0),
                                       q_ - 1);
      fa_[d] = pi.a;
      fb_[d] = pi.b;
    }
    f0_ = 1.0 / (1.0 - shift);
  }

  const size_t sdim = size_t(n_) * q_;
  x_.assign(sdim, 0.0);
  t_.resize(sdim);
  static thread_local std::vector<double> s, eta, zf, lamf, wz, hz, vz, hs, vs;
  s.assign(sdim, 1.0 / q_);
  eta.assign(sdim, 0.0);
  zf.assign(ztotal_fast_, 1.0 / q_);
  lamf.assign(ztotal_fast_, 0.0);
  wz.resize(ztotal_fast_);
  hz.resize(ztotal_fast_);
  vz.resize(ztotal_fast_);
  hs.resize(sdim);
  vs.resize(sdim);
  static thread_local ProjWorkspace pw;

  const double budget = prm_.eps * prm_.eps * (double(ztotal_fast_) + double(sdim));
  DecodeOutcome out;
  auto round_s = [&] {
    std::vector<int> w(n_);
    for (int i = 0; i < n_; ++i)
      w[i] = round_symbol(EmbeddingKind::constant_weight, q_, s.data() + size_t(i) * q_);
    return w;
  };
  auto finish = [&](bool converged, int iters) {
    out.word = round_s();
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
    K.fused_sub2(t_.data(), s.data(), eta.data(), llr.data(), inv_mu, inv_mu, sdim);
    K.affine(t_.data(), t_.data(), 1.0, -shift / q_, sdim);
    for (int j = 0; j < code_.mcheck; ++j) {
      const CheckContext& cc = cc_fast_[j];
      const double* zb = zf.data() + zoff_fast_[j];
      const double* lb = lamf.data() + zoff_fast_[j];
      for (int slot = 0; slot < (q_ - 1) * cc.dc; ++slot) {
        double coef = zb[slot] - lb[slot] * inv_mu;
        const int32_t* idx = cc.gather.data() + size_t(slot) * cc.gather_width;
        for (int t = 0; t < cc.gather_width; ++t) t_[idx[t]] += coef;
      }
    }
    for (int i = 0; i < n_; ++i) {
      const double a = fa_[code_.var_degree[i]];
      const double b = fb_[code_.var_degree[i]];
      const double* tb = t_.data() + size_t(i) * q_;
      double* xb = x_.data() + size_t(i) * q_;
      xb[0] = f0_ * tb[0];
      double sum = 0;
      for (int k = 1; k < q_; ++k) sum += tb[k];
      for (int k = 1; k < q_; ++k) xb[k] = (a - b) * tb[k] + b * sum;
    }

    double prim = 0, change = 0;
    for (int j = 0; j < code_.mcheck; ++j) {
      const CheckContext& cc = cc_fast_[j];
      double* w = wz.data() + zoff_fast_[j];
      for (int slot = 0; slot < (q_ - 1) * cc.dc; ++slot) {
        const int32_t* idx = cc.gather.data() + size_t(slot) * cc.gather_width;
        double acc = 0;
        for (int t = 0; t < cc.gather_width; ++t) acc += x_[idx[t]];
        w[slot] = acc;
      }
    }
    K.relax_mix(hz.data(), wz.data(), zf.data(), rho, ztotal_fast_);
    K.fused_sub2(vz.data(), hz.data(), lamf.data(), lamf.data(), -inv_mu, 0.0,
                 ztotal_fast_);
    for (int j = 0; j < code_.mcheck; ++j) {
      const int dc = cc_fast_[j].dc;
      for (int kappa = 0; kappa < q_ - 1; ++kappa)
        project_parity_polytope(
            std::span<double>(vz.data() + zoff_fast_[j] + size_t(kappa) * dc, dc), pw);
    }
    K.dual_update(lamf.data(), hz.data(), wz.data(), vz.data(), zf.data(), mu,
                  ztotal_fast_, &prim, &change);
    std::swap(zf, vz);

    K.relax_mix(hs.data(), x_.data(), s.data(), rho, sdim);
    K.fused_sub2(vs.data(), hs.data(), eta.data(), eta.data(), -inv_mu, 0.0, sdim);
    for (int i = 0; i < n_; ++i)
      project_simplex_sum_eq1(std::span<double>(vs.data() + size_t(i) * q_, q_), pw);
    K.dual_update(eta.data(), hs.data(), x_.data(), vs.data(), s.data(), mu, sdim,
                  &prim, &change);
    std::swap(s, vs);

    if (trace_) trace_(iter, x_, s, eta);

    if (prim <= budget && change <= budget) return finish(true, iter);

    if (prm_.early_term) {
      std::vector<int> word = round_s();
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

bool symmetry_harness(const FieldCtx& ctx, const NonbinaryCode& code,
                      const Modulation& mod, const RelativeIsometry& iso,
                      std::span<const int> c, std::span<const double> y_iq,
                      double sigma, PenalizedParams params, double tol,
                      bool break_tau, double* max_discrepancy) {
  if (!iso.group_compatible)
    throw std::invalid_argument("constellation does not realize the symmetry condition");
  params.early_term = false;
  params.eps = 1e-300;  // run exactly t_max iterations on both sides
  const int q = ctx.q();
  const int n = code.n;

  std::vector<double> y0(y_iq.size());
  for (int i = 0; i < n; ++i) {
    int beta = break_tau ? (c[i] + 1) % q : c[i];
    auto p = apply_tau(iso, beta, y_iq[2 * i], y_iq[2 * i + 1]);
    y0[2 * i] = p[0];
    y0[2 * i + 1] = p[1];
  }
  std::vector<double> llr = llr_word(mod, y_iq, sigma, EmbeddingKind::constant_weight);
  std::vector<double> llr0 = llr_word(mod, y0, sigma, EmbeddingKind::constant_weight);

  struct Snapshot {
    std::vector<double> x, z, lam;
  };
  std::vector<Snapshot> trace;
  trace.reserve(params.t_max);

  PenalizedDecoder dec_a(ctx, code, params);
  dec_a.set_trace([&](int, std::span<const double> x, std::span<const double> z,
                      std::span<const double> lam) {
    trace.push_back({{x.begin(), x.end()}, {z.begin(), z.end()}, {lam.begin(), lam.end()}});
  });
  dec_a.decode(llr);

  // expected run-B iterates: index-shift every per-symbol block by c
  auto shift_block = [&](const double* src, double* dst, int ci) {
    for (int a = 0; a < q; ++a) dst[a] = src[a ^ ci];
  };
  for (auto& snap : trace) {
    Snapshot ex;
    ex.x.resize(snap.x.size());
    ex.z.resize(snap.z.size());
    ex.lam.resize(snap.lam.size());
    for (int i = 0; i < n; ++i)
      shift_block(snap.x.data() + size_t(i) * q, ex.x.data() + size_t(i) * q, c[i]);
    size_t off = 0;
    for (int j = 0; j < code.mcheck; ++j)
      for (int p = 0; p < code.check_degree[j]; ++p) {
        int ci = c[code.rows[j][p].col];
        shift_block(snap.z.data() + off, ex.z.data() + off, ci);
        shift_block(snap.lam.data() + off, ex.lam.data() + off, ci);
        off += q;
      }
    snap = std::move(ex);
  }

  double worst = 0.0;
  PenalizedDecoder dec_b(ctx, code, params);
  dec_b.set_trace([&](int iter, std::span<const double> x, std::span<const double> z,
                      std::span<const double> lam) {
    // eps = 1e-300 cannot stop an exactly stationary run A: its residuals are
    // exactly zero. From that point on the expected iterate is frozen, so any
    // overrun compares against the final snapshot.
    const Snapshot& ex =
        size_t(iter) <= trace.size() ? trace[iter - 1] : trace.back();
    for (size_t k = 0; k < x.size(); ++k)
      worst = std::max(worst, std::abs(x[k] - ex.x[k]));
    for (size_t k = 0; k < z.size(); ++k)
      worst = std::max(worst, std::abs(z[k] - ex.z[k]));
    for (size_t k = 0; k < lam.size(); ++k)
      worst = std::max(worst, std::abs(lam[k] - ex.lam[k]));
  });
  dec_b.decode(llr0);

  if (max_discrepancy) *max_discrepancy = worst;
  return worst < tol;
}

}  // namespace nbldpc
