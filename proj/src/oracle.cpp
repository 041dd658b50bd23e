#include "nbldpc/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbldpc/relaxed_projection.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc::oracle {

SpcEnumeration enumerate_spc(const FieldCtx& ctx, std::span<const int> h) {
  const int q = ctx.q();
  const int dc = int(h.size());
  if (dc < 2 || dc > 6) throw std::invalid_argument("check degree out of range");
  double count = std::pow(double(q), dc - 1);
  if (count > double(1 << 20)) throw std::invalid_argument("enumeration too large");
  for (int v : h)
    if (v < 1 || v >= q) throw std::invalid_argument("check values must be nonzero");

  SpcEnumeration e;
  e.q = q;
  e.dc = dc;
  e.h.assign(h.begin(), h.end());

  std::vector<int> word(dc, 0);
  const int total = int(count);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    int acc = 0;
    for (int p = dc - 2; p >= 0; --p) {
      word[p] = rem % q;
      rem /= q;
      acc = ctx.add(acc, ctx.mul(h[p], word[p]));
    }
    word[dc - 1] = ctx.div(acc, h[dc - 1]);
    e.words.push_back(word);
    auto f = embed_word(ctx, EmbeddingKind::flanagan, word);
    auto c = embed_word(ctx, EmbeddingKind::constant_weight, word);
    e.flanagan.push_back(std::move(f.data));
    e.cw.push_back(std::move(c.data));
  }
  return e;
}

std::vector<double> project_hull(const std::vector<std::vector<double>>& points,
                                 std::span<const double> v, double gap_tol) {
  const int n = int(points.size());
  if (n == 0) throw std::invalid_argument("empty vertex set");
  if (n > 4096) throw std::invalid_argument("vertex set too large");
  const int dim = int(v.size());

  Eigen::MatrixXd P(dim, n);
  for (int j = 0; j < n; ++j) {
    if (int(points[j].size()) != dim) throw std::invalid_argument("vertex size mismatch");
    for (int i = 0; i < dim; ++i) P(i, j) = points[j][i] - v[i];
  }

  int j0 = 0;
  double best = P.col(0).squaredNorm();
  for (int j = 1; j < n; ++j) {
    double s = P.col(j).squaredNorm();
    if (s < best) {
      best = s;
      j0 = j;
    }
  }
  std::vector<int> corral{j0};
  std::vector<double> lam{1.0};
  Eigen::VectorXd x = P.col(j0);

  auto affine_weights = [&](Eigen::VectorXd& w) {
    int k = int(corral.size());
    Eigen::MatrixXd S(dim, k);
    for (int i = 0; i < k; ++i) S.col(i) = P.col(corral[i]);
    Eigen::MatrixXd A = S.transpose() * S;
    A.array() += 1.0;
    A.diagonal().array() += 1e-13;
    w = A.ldlt().solve(Eigen::VectorXd::Ones(k));
    double s = w.sum();
    if (std::abs(s) < 1e-300) throw std::runtime_error("hull projection degenerate");
    w /= s;
  };
  auto rebuild_x = [&] {
    x.setZero();
    for (size_t i = 0; i < corral.size(); ++i) x += lam[i] * P.col(corral[i]);
  };

  const int cap = 200 * dim + 5000;
  for (int iter = 0; iter < cap; ++iter) {
    Eigen::VectorXd scores = P.transpose() * x;
    int jb = 0;
    double smin = scores(0);
    for (int j = 1; j < n; ++j)
      if (scores(j) < smin) {
        smin = scores(j);
        jb = j;
      }
    double gap = x.squaredNorm() - smin;
    if (gap <= gap_tol * 0.5) break;
    if (std::find(corral.begin(), corral.end(), jb) != corral.end()) break;
    corral.push_back(jb);
    lam.push_back(0.0);

    while (true) {
      Eigen::VectorXd w;
      affine_weights(w);
      double wmin = w.minCoeff();
      if (wmin > 1e-12) {
        lam.assign(w.data(), w.data() + w.size());
        rebuild_x();
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < w.size(); ++i)
        if (w(i) <= 1e-12 && lam[i] - w(i) > 1e-300)
          theta = std::min(theta, lam[i] / (lam[i] - w(i)));
      for (int i = 0; i < w.size(); ++i) lam[i] = (1 - theta) * lam[i] + theta * w(i);
      std::vector<int> nc;
      std::vector<double> nl;
      for (size_t i = 0; i < corral.size(); ++i)
        if (lam[i] > 1e-11) {
          nc.push_back(corral[i]);
          nl.push_back(lam[i]);
        }
      if (nc.empty()) {
        nc.push_back(corral[0]);
        nl.push_back(1.0);
      }
      corral = std::move(nc);
      lam = std::move(nl);
      double s = 0;
      for (double l : lam) s += l;
      for (double& l : lam) l /= s;
      rebuild_x();
    }
  }

  double xx = x.squaredNorm();
  for (int j = 0; j < n; ++j)
    if (xx - x.dot(P.col(j)) > gap_tol)
      throw std::runtime_error("hull projection certificate failed");

  std::vector<double> out(dim);
  for (int i = 0; i < dim; ++i) out[i] = x(i) + v[i];
  return out;
}

std::vector<std::vector<double>> build_phi(const FieldCtx& ctx, EmbeddingKind kind) {
  const int q = ctx.q();
  const int len = symbol_len(kind, q);
  const int coord0 = kind == EmbeddingKind::flanagan ? 1 : 0;
  std::vector<std::vector<double>> phi(len, std::vector<double>(len, 0.0));
  for (int kappa = 1; kappa < q; ++kappa) {
    auto members = ctx.set_members(ctx.btilde_set(kappa, 1));
    for (int a : members)
      for (int b : members) phi[a - coord0][b - coord0] += 1.0;
  }
  return phi;
}

std::vector<double> dense_xupdate_oracle(const FieldCtx& ctx, EmbeddingKind kind,
                                         int d_v, std::span<const double> t,
                                         double identity_coef) {
  auto phi = build_phi(ctx, kind);
  const int len = int(phi.size());
  if (int(t.size()) != len) throw std::invalid_argument("t size mismatch");
  Eigen::MatrixXd M(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j)
      M(i, j) = d_v * phi[i][j] + (i == j ? identity_coef : 0.0);
  Eigen::VectorXd rhs(len);
  for (int i = 0; i < len; ++i) rhs(i) = t[i];
  Eigen::VectorXd sol = M.fullPivLu().solve(rhs);
  return {sol.data(), sol.data() + len};
}

ConjectureReport validate_conjecture_gf4(int d, int trials, uint64_t seed) {
  if (d < 2 || d > 6) throw std::invalid_argument("d out of range");
  FieldCtx ctx = FieldCtx::with_default_poly(2);
  std::vector<int> ones(d, 1);
  auto e = enumerate_spc(ctx, ones);

  InnerParams ip;
  ip.eps = 1e-8;
  ip.t_max = 20000;
  RelaxedProjector proj(ctx, EmbeddingKind::flanagan, d, ip);

  const int dim = 3 * d;
  std::vector<double> v(dim), fast(dim);
  ConjectureReport rep;
  rep.trials = trials;
  double sum = 0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng = trial_stream(seed, trial, StreamPurpose::test_points);
    for (double& x : v) x = 4.0 * rng.uniform01();
    auto exact = project_hull(e.flanagan, v);
    InnerState st;
    proj.project_normalized(v, fast, st);
    double d2 = 0;
    for (int i = 0; i < dim; ++i) {
      double diff = exact[i] - fast[i];
      d2 += diff * diff;
    }
    double l2 = std::sqrt(d2);
    rep.max_l2 = std::max(rep.max_l2, l2);
    sum += l2;
  }
  rep.mean_l2 = trials ? sum / trials : 0.0;
  return rep;
}

}  // namespace nbldpc::oracle
