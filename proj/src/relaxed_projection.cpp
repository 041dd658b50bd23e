#include "nbldpc/relaxed_projection.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace nbldpc {

PairInverse symmetric_pair_inverse(double diag, double offdiag, int n) {
  double dmo = diag - offdiag;
  double dpn = diag + (n - 1) * offdiag;
  if (dmo == 0.0 || dpn == 0.0) throw std::domain_error("singular pair matrix");
  double b = -offdiag / (dmo * dpn);
  return {1.0 / dmo + b, b};
}

RelaxedProjector::RelaxedProjector(const FieldCtx& ctx, EmbeddingKind kind, int dc,
                                   InnerParams prm)
    : ctx_(&ctx), kind_(kind), q_(ctx.q()), dc_(dc),
      len_(symbol_len(kind, ctx.q())), gw_(ctx.q() / 2), prm_(prm) {
  if (dc < 2) throw std::invalid_argument("check degree must be at least 2");
  std::vector<int> ones(dc_, 1);
  gather_norm_ = build_gather(ones);
  double nu = prm_.mu;
  auto pi = symmetric_pair_inverse(1.0 + nu + nu * (q_ / 2.0), nu * (q_ / 4.0), q_ - 1);
  ia_ = pi.a;
  ib_ = pi.b;
  i0_ = 1.0 / (1.0 + nu);
}

std::vector<int32_t> RelaxedProjector::build_gather(std::span<const int> h) const {
  int coord0 = kind_ == EmbeddingKind::flanagan ? 1 : 0;
  std::vector<int32_t> g(size_t(q_ - 1) * dc_ * gw_);
  for (int kappa = 1; kappa < q_; ++kappa)
    for (int p = 0; p < dc_; ++p) {
      const ElemMask& s = ctx_->btilde_set(kappa, h[p]);
      int32_t* dst = g.data() + (size_t(kappa - 1) * dc_ + p) * gw_;
      int w = 0;
      for (int a = 1; a < q_; ++a)
        if (s.contains(a)) dst[w++] = int32_t(p * len_ + a - coord0);
    }
  return g;
}

InnerResult RelaxedProjector::run(const std::vector<int32_t>& gather,
                                  std::span<const double> v, std::span<double> out,
                                  InnerState& st) const {
  const int dim = dc_ * len_;
  const int npar = (q_ - 1) * dc_;
  const double nu = prm_.mu;
  const bool cw = kind_ == EmbeddingKind::constant_weight;
  const int pair_off = cw ? 1 : 0;
  const int pair_n = q_ - 1;
  auto simplex = [cw](std::span<double> x, ProjWorkspace& ws) {
    if (cw)
      project_simplex_sum_eq1(x, ws);
    else
      project_simplex_sum_le1(x, ws);
  };

  static thread_local ProjWorkspace pw;
  static thread_local std::vector<double> w, rhs, tmp, g, pold;
  w.resize(dim);
  rhs.resize(dim);
  tmp.resize(std::max(len_, dc_));
  g.resize(dc_);
  pold.resize(std::max(len_, dc_));

  if (!st.warm) {
    st.u.assign(v.begin(), v.end());
    for (int c = 0; c < dc_; ++c)
      simplex(std::span<double>(st.u.data() + size_t(c) * len_, len_), pw);
    st.yu.assign(dim, 0.0);
    st.p.resize(npar);
    for (int k = 0; k < npar; ++k) {
      const int32_t* idx = gather.data() + size_t(k) * gw_;
      double s = 0;
      for (int t = 0; t < gw_; ++t) s += v[idx[t]];
      st.p[k] = s;
    }
    for (int kappa = 0; kappa < q_ - 1; ++kappa)
      project_parity_polytope(std::span<double>(st.p.data() + size_t(kappa) * dc_, dc_), pw);
    st.dp.assign(npar, 0.0);
    st.warm = true;
  }

  const double res_budget = prm_.eps * prm_.eps * (dim + npar);
  InnerResult res;
  for (int iter = 1; iter <= prm_.t_max; ++iter) {
    res.iters = iter;
    for (int i = 0; i < dim; ++i) rhs[i] = v[i] + nu * st.u[i] - st.yu[i];
    for (int k = 0; k < npar; ++k) {
      double coef = nu * st.p[k] - st.dp[k];
      const int32_t* idx = gather.data() + size_t(k) * gw_;
      for (int t = 0; t < gw_; ++t) rhs[idx[t]] += coef;
    }
    for (int c = 0; c < dc_; ++c) {
      double* wc = w.data() + size_t(c) * len_;
      const double* rc = rhs.data() + size_t(c) * len_;
      if (cw) wc[0] = i0_ * rc[0];
      double s = 0;
      for (int i = pair_off; i < len_; ++i) s += rc[i];
      for (int i = 0; i < pair_n; ++i)
        wc[pair_off + i] = (ia_ - ib_) * rc[pair_off + i] + ib_ * s;
    }

    double prim = 0, change = 0;
    for (int c = 0; c < dc_; ++c) {
      double* uc = st.u.data() + size_t(c) * len_;
      double* yc = st.yu.data() + size_t(c) * len_;
      const double* wc = w.data() + size_t(c) * len_;
      std::memcpy(pold.data(), uc, sizeof(double) * len_);
      for (int i = 0; i < len_; ++i) uc[i] = wc[i] + yc[i] / nu;
      simplex(std::span<double>(uc, len_), pw);
      for (int i = 0; i < len_; ++i) {
        double d = wc[i] - uc[i];
        yc[i] += nu * d;
        prim += d * d;
        double du = uc[i] - pold[i];
        change += du * du;
      }
    }
    for (int kappa = 0; kappa < q_ - 1; ++kappa) {
      double* pk = st.p.data() + size_t(kappa) * dc_;
      double* dk = st.dp.data() + size_t(kappa) * dc_;
      for (int p = 0; p < dc_; ++p) {
        const int32_t* idx = gather.data() + (size_t(kappa) * dc_ + p) * gw_;
        double s = 0;
        for (int t = 0; t < gw_; ++t) s += w[idx[t]];
        g[p] = s;
      }
      std::memcpy(pold.data(), pk, sizeof(double) * dc_);
      for (int p = 0; p < dc_; ++p) pk[p] = g[p] + dk[p] / nu;
      project_parity_polytope(std::span<double>(pk, dc_), pw);
      for (int p = 0; p < dc_; ++p) {
        double d = g[p] - pk[p];
        dk[p] += nu * d;
        prim += d * d;
        double dpp = pk[p] - pold[p];
        change += dpp * dpp;
      }
    }
    if (prim <= res_budget && change <= res_budget) {
      res.converged = true;
      break;
    }
  }
  std::memcpy(out.data(), w.data(), sizeof(double) * dim);
  return res;
}

InnerResult RelaxedProjector::project_normalized(std::span<const double> v,
                                                 std::span<double> out,
                                                 InnerState& st) const {
  return run(gather_norm_, v, out, st);
}

InnerResult RelaxedProjector::project_for_check(std::span<const int> h,
                                                std::span<const double> v,
                                                std::span<double> out,
                                                InnerState& st) const {
  int coord0 = kind_ == EmbeddingKind::flanagan ? 1 : 0;
  static thread_local std::vector<double> vn, wn;
  vn.resize(dim());
  wn.resize(dim());
  for (int p = 0; p < dc_; ++p)
    for (int j = 0; j < len_; ++j)
      vn[size_t(p) * len_ + j] = v[size_t(p) * len_ + ctx_->div(j + coord0, h[p]) - coord0];
  InnerResult res = run(gather_norm_, vn, wn, st);
  for (int p = 0; p < dc_; ++p)
    for (int j = 0; j < len_; ++j)
      out[size_t(p) * len_ + j] = wn[size_t(p) * len_ + ctx_->mul(j + coord0, h[p]) - coord0];
  return res;
}

InnerResult RelaxedProjector::project_direct(std::span<const int> h,
                                             std::span<const double> v,
                                             std::span<double> out,
                                             InnerState& st) const {
  return run(build_gather(h), v, out, st);
}

double RelaxedProjector::feasibility_gap(std::span<const int> h,
                                         std::span<const double> pt) const {
  ProjWorkspace pw;
  std::vector<double> buf(std::max(len_, dc_));
  const bool cw = kind_ == EmbeddingKind::constant_weight;
  auto simplex = [cw](std::span<double> x, ProjWorkspace& ws) {
    if (cw)
      project_simplex_sum_eq1(x, ws);
    else
      project_simplex_sum_le1(x, ws);
  };
  double gap = 0;
  for (int c = 0; c < dc_; ++c) {
    std::memcpy(buf.data(), pt.data() + size_t(c) * len_, sizeof(double) * len_);
    simplex(std::span<double>(buf.data(), len_), pw);
    double d2 = 0;
    for (int i = 0; i < len_; ++i) {
      double d = buf[i] - pt[size_t(c) * len_ + i];
      d2 += d * d;
    }
    gap = std::max(gap, std::sqrt(d2));
  }
  auto gather = build_gather(h);
  std::vector<double> g(dc_);
  for (int kappa = 0; kappa < q_ - 1; ++kappa) {
    for (int p = 0; p < dc_; ++p) {
      const int32_t* idx = gather.data() + (size_t(kappa) * dc_ + p) * gw_;
      double s = 0;
      for (int t = 0; t < gw_; ++t) s += pt[idx[t]];
      g[p] = s;
    }
    gap = std::max(gap, parity_polytope_dist(std::span<const double>(g.data(), dc_), pw));
  }
  return gap;
}

}  // namespace nbldpc
