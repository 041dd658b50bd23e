#pragma once

// Central numeric tolerances. Every comparison threshold used by library code
// lives here so tests and decoders agree on what "integral" or "converged" means.
namespace nbldpc::tol {

// entries within this of {0,1} count as integral
inline constexpr double integrality = 1e-9;

// validity of embedded-matrix column sums, simplex feasibility checks
inline constexpr double feasibility = 1e-9;

// projection self-consistency (idempotence) in tests
inline constexpr double projection_idempotence = 1e-10;

// constellation/tau construction residual for the symmetry isometries
inline constexpr double isometry = 1e-12;

// llr magnitudes are clipped here; keeps exp/log finite at extreme SNR
inline constexpr double llr_clip = 50.0;

}  // namespace nbldpc::tol
