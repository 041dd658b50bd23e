#pragma once
#include <string>
#include <vector>

#include "nbldpc/embedding.hpp"

namespace nbldpc {

enum class DecodeStatus {
  codeword_early,      // early-termination rounding passed the syndrome
  codeword_converged,  // residual tolerance (or final iterate) rounds to a codeword
  tolerance_reached,   // converged but fractional
  fractional_at_tmax,
};

const char* to_string(DecodeStatus s);

struct DecodeOutcome {
  std::vector<int> word;
  DecodeStatus status = DecodeStatus::fractional_at_tmax;
  int iterations = 0;
  double wall_ms = 0.0;
  bool syndrome = false;
  int degraded_inner = 0;  // inner projections that ran out of iterations
};

struct LpDecoderParams {
  double mu = 2.0;
  double rho = 1.9;
  int t_max = 200;
  double eps = 1e-5;
  bool early_term = true;
  EmbeddingKind kind = EmbeddingKind::flanagan;

  void validate() const;  // throws std::invalid_argument
};

}  // namespace nbldpc
