#include <immintrin.h>

#include "nbldpc/simd_kernels.hpp"

// Compiled with -mavx2 only; callers reach this table through active_kernels()
// which checks cpu support first. No FMA: mul and add round separately so the
// scalar reference produces identical elementwise results.
namespace nbldpc::kern {
namespace {

void fused_sub2_v(double* t, const double* s, const double* eta, const double* gamma,
                  double c1, double c2, size_t n) {
  __m256d vc1 = _mm256_set1_pd(c1), vc2 = _mm256_set1_pd(c2);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs = _mm256_loadu_pd(s + i);
    __m256d ve = _mm256_mul_pd(vc1, _mm256_loadu_pd(eta + i));
    __m256d vg = _mm256_mul_pd(vc2, _mm256_loadu_pd(gamma + i));
    _mm256_storeu_pd(t + i, _mm256_sub_pd(_mm256_sub_pd(vs, ve), vg));
  }
  for (; i < n; ++i) t[i] = s[i] - c1 * eta[i] - c2 * gamma[i];
}

void relax_mix_v(double* h, const double* w, const double* z, double rho, size_t n) {
  double omr = 1.0 - rho;
  __m256d vr = _mm256_set1_pd(rho), vo = _mm256_set1_pd(omr);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_mul_pd(vr, _mm256_loadu_pd(w + i));
    __m256d b = _mm256_mul_pd(vo, _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(h + i, _mm256_add_pd(a, b));
  }
  for (; i < n; ++i) h[i] = rho * w[i] + omr * z[i];
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

void dual_update_v(double* lam, const double* h, const double* w, const double* znew,
                   const double* zold, double mu, size_t n, double* primal_sq,
                   double* change_sq) {
  __m256d vmu = _mm256_set1_pd(mu);
  __m256d pr = _mm256_setzero_pd(), ch = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vh = _mm256_loadu_pd(h + i);
    __m256d vz = _mm256_loadu_pd(znew + i);
    __m256d vl = _mm256_loadu_pd(lam + i);
    _mm256_storeu_pd(lam + i, _mm256_add_pd(vl, _mm256_mul_pd(vmu, _mm256_sub_pd(vh, vz))));
    __m256d dp = _mm256_sub_pd(_mm256_loadu_pd(w + i), vz);
    __m256d dc = _mm256_sub_pd(vz, _mm256_loadu_pd(zold + i));
    pr = _mm256_add_pd(pr, _mm256_mul_pd(dp, dp));
    ch = _mm256_add_pd(ch, _mm256_mul_pd(dc, dc));
  }
  double prs = hsum(pr), chs = hsum(ch);
  for (; i < n; ++i) {
    lam[i] += mu * (h[i] - znew[i]);
    double dp = w[i] - znew[i];
    double dc = znew[i] - zold[i];
    prs += dp * dp;
    chs += dc * dc;
  }
  *primal_sq += prs;
  *change_sq += chs;
}

double sum_v(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_diff_v(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void clip_v(double* x, double lo, double hi, size_t n) {
  __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_max_pd(v, vlo);
    v = _mm256_min_pd(v, vhi);
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) x[i] = x[i] < lo ? lo : (x[i] > hi ? hi : x[i]);
}

void affine_v(double* y, const double* x, double c1, double c2, size_t n) {
  __m256d v1 = _mm256_set1_pd(c1), v2 = _mm256_set1_pd(c2);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(v1, _mm256_loadu_pd(x + i)), v2));
  for (; i < n; ++i) y[i] = c1 * x[i] + c2;
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{"avx2",       fused_sub2_v, relax_mix_v, dual_update_v,
                         sum_v,        sum_sq_diff_v, clip_v,     affine_v};
  return k;
}

}  // namespace nbldpc::kern
