#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "nbldpc/embedding.hpp"
#include "nbldpc/gf2m.hpp"
#include "nbldpc/projections.hpp"

namespace nbldpc {

// Inverse of the n x n matrix with constant diagonal and constant off-diagonal,
// returned as the (diag, offdiag) pair of the inverse. Requires diag != offdiag
// and diag + (n-1) offdiag != 0.
struct PairInverse {
  double a;  // diagonal of the inverse
  double b;  // off-diagonal of the inverse
};
PairInverse symmetric_pair_inverse(double diag, double offdiag, int n);

struct InnerParams {
  double mu = 1.0;
  double eps = 1e-5;
  int t_max = 100;
};

// Replicas and scaled duals of the consensus splitting. Reusable across calls
// for the same check (warm start); reset() forces a cold start.
struct InnerState {
  std::vector<double> u, yu;  // per-column simplex replicas, flat like w
  std::vector<double> p, dp;  // per-kappa parity replicas, (q-1) rows of dc
  bool warm = false;
  void reset() { warm = false; }
};

struct InnerResult {
  int iters = 0;
  bool converged = false;  // false means t_max ran out; result is best effort
};

// Euclidean projection onto the relaxed SPC code polytope: per-column simplex
// (sum <= 1 for Flanagan, = 1 for constant-weight) intersected with one parity
// polytope per nonempty bit subset kappa acting on the gathered coordinates.
// Solved by consensus ADMM with one replica per constraint set; the quadratic
// center step has the closed-form pair inverse because the gather patterns
// overlap uniformly (diag 2^{m-1}, offdiag 2^{m-2} per column).
class RelaxedProjector {
 public:
  RelaxedProjector(const FieldCtx& ctx, EmbeddingKind kind, int dc, InnerParams prm);

  int dim() const { return dc_ * len_; }
  int dc() const { return dc_; }
  const InnerParams& params() const { return prm_; }

  // polytope of the all-ones check
  InnerResult project_normalized(std::span<const double> v, std::span<double> out,
                                 InnerState& st) const;

  // polytope of check values h: rotate into the all-ones polytope, project,
  // rotate back. Warm-start state lives in the normalized domain.
  InnerResult project_for_check(std::span<const int> h, std::span<const double> v,
                                std::span<double> out, InnerState& st) const;

  // same polytope as project_for_check but built from the untranslated gather
  // sets of h, no rotation. Reference path for the rotation identity tests.
  InnerResult project_direct(std::span<const int> h, std::span<const double> v,
                             std::span<double> out, InnerState& st) const;

  // constraint violation of an arbitrary point (max over simplex and parity
  // distances), for feasibility assertions in tests
  double feasibility_gap(std::span<const int> h, std::span<const double> pt) const;

 private:
  InnerResult run(const std::vector<int32_t>& gather, std::span<const double> v,
                  std::span<double> out, InnerState& st) const;
  std::vector<int32_t> build_gather(std::span<const int> h) const;

  const FieldCtx* ctx_;
  EmbeddingKind kind_;
  int q_, dc_, len_, gw_;
  InnerParams prm_;
  std::vector<int32_t> gather_norm_;
  double ia_, ib_;  // pair inverse of (1+mu) I + mu Phi on nonzero coords
  double i0_;       // constant-weight coordinate 0 is unconstrained by parity
};

}  // namespace nbldpc
