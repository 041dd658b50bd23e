#pragma once
#include <cstddef>

namespace nbldpc::kern {

// The ADMM inner-loop elementwise operations, exposed as a dispatch table with
// a scalar reference implementation and an AVX2 variant chosen at runtime.
// Elementwise kernels produce bit-identical results across backends (the whole
// project builds with fp-contract off and the AVX2 code uses no FMA).
// Reductions differ only in summation order; tests bound the relative gap.
struct Kernels {
  const char* name;
  // t[i] = s[i] - c1*eta[i] - c2*gamma[i]
  void (*fused_sub2)(double* t, const double* s, const double* eta,
                     const double* gamma, double c1, double c2, size_t n);
  // h[i] = rho*w[i] + (1-rho)*z[i]
  void (*relax_mix)(double* h, const double* w, const double* z, double rho,
                    size_t n);
  // lam[i] += mu*(h[i] - znew[i]); accumulates sum (w-znew)^2 into *primal_sq
  // and sum (znew-zold)^2 into *change_sq
  void (*dual_update)(double* lam, const double* h, const double* w,
                      const double* znew, const double* zold, double mu,
                      size_t n, double* primal_sq, double* change_sq);
  double (*sum)(const double* x, size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, size_t n);
  void (*clip)(double* x, double lo, double hi, size_t n);
  // y[i] = c1*x[i] + c2
  void (*affine)(double* y, const double* x, double c1, double c2, size_t n);
};

const Kernels& scalar_kernels();
const Kernels& avx2_kernels();

// AVX2 when the CPU supports it and NBLDPC_FORCE_SCALAR is unset; resolved
// once on first use.
const Kernels& active_kernels();

}  // namespace nbldpc::kern
