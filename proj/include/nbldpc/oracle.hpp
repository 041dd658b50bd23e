#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "nbldpc/embedding.hpp"
#include "nbldpc/gf2m.hpp"

// Brute-force references for tests: codeword enumeration, certified hull
// projection, dense linear algebra, and the GF(4) polytope-equality check.
// None of this is on the decoding hot path.
namespace nbldpc::oracle {

struct SpcEnumeration {
  int q = 0, dc = 0;
  std::vector<int> h;
  std::vector<std::vector<int>> words;
  std::vector<std::vector<double>> flanagan;  // flat symbol-major embeddings
  std::vector<std::vector<double>> cw;
};

// all q^{dc-1} solutions of sum h_p c_p = 0, lexicographic in the free symbols
SpcEnumeration enumerate_spc(const FieldCtx& ctx, std::span<const int> h);

// Euclidean projection onto conv(points) by the min-norm-point method over the
// vertex set, certified on exit: <v - p, z - p> <= gap_tol for every vertex z.
// Throws if the certificate cannot be met within the iteration cap.
std::vector<double> project_hull(const std::vector<std::vector<double>>& points,
                                 std::span<const double> v, double gap_tol = 1e-8);

// Phi assembled entry-by-entry from the kappa gather sets (q-1 square for
// Flanagan, q square with a zero row and column for constant-weight)
std::vector<std::vector<double>> build_phi(const FieldCtx& ctx, EmbeddingKind kind);

// dense solve of (d_v Phi + identity_coef I) x = t
std::vector<double> dense_xupdate_oracle(const FieldCtx& ctx, EmbeddingKind kind,
                                         int d_v, std::span<const double> t,
                                         double identity_coef = 1.0);

struct ConjectureReport {
  int trials = 0;
  double max_l2 = 0.0;
  double mean_l2 = 0.0;
};

// samples 3 x d Flanagan matrices with entries uniform on [0, 4], projects
// onto the constraint polytope and onto the hull of codeword embeddings for
// the all-ones check, reports the largest l2 gap between the two projections
ConjectureReport validate_conjecture_gf4(int d, int trials, uint64_t seed);

}  // namespace nbldpc::oracle
