#pragma once
#include <array>
#include <span>
#include <string>
#include <vector>

#include "nbldpc/embedding.hpp"
#include "nbldpc/gf2m.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc {

// PSK constellation indexed by field element. All points unit norm.
struct Modulation {
  std::string name;
  int q = 0;
  std::vector<std::array<double, 2>> points;
};

// 0 -> (1,0), xi^k -> angle 2*pi*(k+1)/4. Requires q = 4.
Modulation make_qpsk(const FieldCtx& ctx);

// Natural labeling s_delta = (cos(2*pi*delta/8), sin(2*pi*delta/8)), delta the
// integer representation. An assumption, not a derived mapping; it does not
// realize the decoder symmetry condition (see make_relative_isometries).
Modulation make_psk8();

Modulation make_modulation(const FieldCtx& ctx);

double sigma_from_esn0(double es_n0_db, double rate);

// y_i = points[word_i] + noise, noise i.i.d. N(0, sigma^2) per dimension.
// Output interleaved (I0, Q0, I1, Q1, ...).
void transmit(const Modulation& mod, std::span<const int> word, double sigma,
              RngStream& rng, std::vector<double>& out_iq);

// Per-symbol LLR vector for one received point.
//   flanagan:        lambda_d = (|y - s_d|^2 - |y - s_0|^2) / (2 sigma^2), d >= 1
//   constant_weight: lambda_d = |y - s_d|^2 / (2 sigma^2), d >= 0
// The CW form drops the shared log-normalizer, which only shifts the decoder
// objective by a constant. Values are clipped to +-50.
void llr_point(const Modulation& mod, double yi, double yq, double sigma,
               EmbeddingKind kind, double* out);

// Whole word, flat symbol-major (length N * symbol_len).
std::vector<double> llr_word(const Modulation& mod, std::span<const double> iq,
                             double sigma, EmbeddingKind kind);

// Plane isometries tau_beta with tau_beta(s_a) = s_{a xor beta} for all a,
// when they exist. Each is built from two independent anchor points and then
// verified against the whole constellation; group_compatible is false if any
// beta fails, and the maps must not be used in that case.
struct RelativeIsometry {
  bool group_compatible = false;
  int q = 0;
  std::vector<std::array<double, 4>> mats;  // row-major 2x2 per beta
};

RelativeIsometry make_relative_isometries(const Modulation& mod);

std::array<double, 2> apply_tau(const RelativeIsometry& iso, int beta, double yi,
                                double yq);

}  // namespace nbldpc
