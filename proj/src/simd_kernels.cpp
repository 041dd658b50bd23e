#include "nbldpc/simd_kernels.hpp"

#include <cstdlib>

namespace nbldpc::kern {
namespace {

void fused_sub2_s(double* t, const double* s, const double* eta, const double* gamma,
                  double c1, double c2, size_t n) {
  for (size_t i = 0; i < n; ++i) t[i] = s[i] - c1 * eta[i] - c2 * gamma[i];
}

void relax_mix_s(double* h, const double* w, const double* z, double rho, size_t n) {
  double omr = 1.0 - rho;
  for (size_t i = 0; i < n; ++i) h[i] = rho * w[i] + omr * z[i];
}

void dual_update_s(double* lam, const double* h, const double* w, const double* znew,
                   const double* zold, double mu, size_t n, double* primal_sq,
                   double* change_sq) {
  double pr = 0.0, ch = 0.0;
  for (size_t i = 0; i < n; ++i) {
    lam[i] += mu * (h[i] - znew[i]);
    double dp = w[i] - znew[i];
    double dc = znew[i] - zold[i];
    pr += dp * dp;
    ch += dc * dc;
  }
  *primal_sq += pr;
  *change_sq += ch;
}

double sum_s(const double* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_diff_s(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void clip_s(double* x, double lo, double hi, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] = x[i] < lo ? lo : (x[i] > hi ? hi : x[i]);
}

void affine_s(double* y, const double* x, double c1, double c2, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = c1 * x[i] + c2;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar",       fused_sub2_s, relax_mix_s, dual_update_s,
                         sum_s,          sum_sq_diff_s, clip_s,     affine_s};
  return k;
}

const Kernels& active_kernels() {
  static const Kernels& chosen = []() -> const Kernels& {
    if (std::getenv("NBLDPC_FORCE_SCALAR")) return scalar_kernels();
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2")) return avx2_kernels();
#endif
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace nbldpc::kern
