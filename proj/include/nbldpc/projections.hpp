#pragma once
#include <span>
#include <vector>

namespace nbldpc {

// Scratch buffers for the sort-based projections; reuse across calls, do not
// share between threads.
struct ProjWorkspace {
  std::vector<double> buf;
  std::vector<int> idx;
};

// Euclidean projection onto { x >= 0, sum x <= 1 } in place.
void project_simplex_sum_le1(std::span<double> x, ProjWorkspace& ws);

// Euclidean projection onto { x >= 0, sum x = target } in place.
void project_simplex_sum_eq1(std::span<double> x, ProjWorkspace& ws, double target = 1.0);

// Euclidean projection onto the convex hull of even-weight binary vectors of
// length d >= 2, in place. Cube-clip plus, when the single candidate odd-set
// cut is violated, an exact projection onto that cut face. Sorting ties break
// on the original index so results are deterministic.
void project_parity_polytope(std::span<double> x, ProjWorkspace& ws);

// Distance-based membership helper for tests: ||v - proj(v)||_2.
double parity_polytope_dist(std::span<const double> v, ProjWorkspace& ws);

// perm maps projected coordinates to source coordinates: out[i] = in[perm[i]].
void apply_perm(std::span<const double> in, std::span<const int32_t> perm,
                std::span<double> out);

}  // namespace nbldpc
