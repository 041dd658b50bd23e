#include "nbldpc/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbldpc {
namespace {

// descending by value, ties by original index
void sorted_desc(std::span<const double> x, ProjWorkspace& ws) {
  size_t d = x.size();
  ws.idx.resize(d);
  for (size_t i = 0; i < d; ++i) ws.idx[i] = int(i);
  std::sort(ws.idx.begin(), ws.idx.end(), [&](int a, int b) {
    if (x[a] != x[b]) return x[a] > x[b];
    return a < b;
  });
}

}  // namespace

void project_simplex_sum_eq1(std::span<double> x, ProjWorkspace& ws, double target) {
  size_t d = x.size();
  sorted_desc(x, ws);
  double cum = 0.0, tau = 0.0;
  size_t rho = 0;
  for (size_t j = 0; j < d; ++j) {
    double v = x[ws.idx[j]];
    cum += v;
    double t = (cum - target) / double(j + 1);
    if (v - t > 0.0) {
      rho = j + 1;
      tau = t;
    }
  }
  (void)rho;
  for (size_t i = 0; i < d; ++i) x[i] = std::max(x[i] - tau, 0.0);
}

void project_simplex_sum_le1(std::span<double> x, ProjWorkspace& ws) {
  double pos_sum = 0.0;
  for (double v : x) pos_sum += std::max(v, 0.0);
  if (pos_sum <= 1.0) {
    for (double& v : x) v = std::max(v, 0.0);
    return;
  }
  project_simplex_sum_eq1(x, ws, 1.0);
}

namespace {

// projection onto { u in [0,1]^d : sum u = target } by exact breakpoint walk
// over g(tau) = sum clip(w_i - tau, 0, 1), which is decreasing piecewise linear
void box_simplex_eq(std::span<double> w, ProjWorkspace& ws, double target) {
  size_t d = w.size();
  ws.buf.resize(2 * d);
  for (size_t i = 0; i < d; ++i) {
    ws.buf[i] = w[i] - 1.0;
    ws.buf[d + i] = w[i];
  }
  std::sort(ws.buf.begin(), ws.buf.end());
  auto g = [&](double tau) {
    double s = 0.0;
    for (double v : w) s += std::clamp(v - tau, 0.0, 1.0);
    return s;
  };
  double lo = ws.buf.front();  // g(lo) = d, maximum
  double glo = double(d);
  double tau = lo;
  bool found = false;
  for (size_t j = 0; j < 2 * d; ++j) {
    double hi = ws.buf[j];
    double ghi = g(hi);
    if (ghi <= target) {
      tau = (ghi == glo) ? hi : lo + (glo - target) * (hi - lo) / (glo - ghi);
      found = true;
      break;
    }
    lo = hi;
    glo = ghi;
  }
  if (!found) tau = ws.buf.back();  // target <= 0; clamp at the last breakpoint
  for (size_t i = 0; i < d; ++i) w[i] = std::clamp(w[i] - tau, 0.0, 1.0);
}

}  // namespace

void project_parity_polytope(std::span<double> x, ProjWorkspace& ws) {
  size_t d = x.size();
  if (d < 2) throw std::invalid_argument("parity polytope needs dimension >= 2");

  // candidate cut: S maximizing sum_S z - sum_!S z - (|S|-1) over odd-size S.
  // take z_i >= 1/2, then if the count is even toggle the entry nearest 1/2.
  ws.buf.resize(d);
  double* z = ws.buf.data();
  int s_card = 0;
  for (size_t i = 0; i < d; ++i) {
    z[i] = std::clamp(x[i], 0.0, 1.0);
    if (z[i] >= 0.5) ++s_card;
  }
  ws.idx.resize(d);
  int* in_s = ws.idx.data();
  for (size_t i = 0; i < d; ++i) in_s[i] = z[i] >= 0.5;
  if (s_card % 2 == 0) {
    size_t flip = 0;
    double best = 1e300;
    for (size_t i = 0; i < d; ++i) {
      double dist = std::abs(z[i] - 0.5);
      if (dist < best) {
        best = dist;
        flip = i;
      }
    }
    in_s[flip] ^= 1;
    s_card += in_s[flip] ? 1 : -1;
  }
  double cut = 0.0;
  for (size_t i = 0; i < d; ++i) cut += in_s[i] ? z[i] : -z[i];
  if (cut <= double(s_card - 1)) {
    for (size_t i = 0; i < d; ++i) x[i] = z[i];
    return;
  }

  // project onto the cut face: flip the complement, match sum d-1, flip back.
  // box_simplex_eq only touches ws.buf; in_s lives in ws.idx and survives.
  for (size_t i = 0; i < d; ++i)
    if (!in_s[i]) x[i] = 1.0 - x[i];
  box_simplex_eq(x, ws, double(d) - 1.0);
  for (size_t i = 0; i < d; ++i)
    if (!in_s[i]) x[i] = 1.0 - x[i];
}

double parity_polytope_dist(std::span<const double> v, ProjWorkspace& ws) {
  std::vector<double> p(v.begin(), v.end());
  project_parity_polytope(p, ws);
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    double dlt = v[i] - p[i];
    acc += dlt * dlt;
  }
  return std::sqrt(acc);
}

void apply_perm(std::span<const double> in, std::span<const int32_t> perm,
                std::span<double> out) {
  for (size_t i = 0; i < perm.size(); ++i) out[i] = in[perm[i]];
}

}  // namespace nbldpc
