#include "nbldpc/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nbldpc/tolerances.hpp"

namespace nbldpc {

Modulation make_qpsk(const FieldCtx& ctx) {
  if (ctx.q() != 4) throw std::invalid_argument("QPSK needs q = 4");
  Modulation mod;
  mod.name = "qpsk";
  mod.q = 4;
  mod.points.resize(4);
  mod.points[0] = {1.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    double ang = 2.0 * std::numbers::pi * (k + 1) / 4.0;
    mod.points[ctx.exp_table()[k]] = {std::cos(ang), std::sin(ang)};
  }
  return mod;
}

Modulation make_psk8() {
  Modulation mod;
  mod.name = "psk8";
  mod.q = 8;
  mod.points.resize(8);
  for (int d = 0; d < 8; ++d) {
    double ang = 2.0 * std::numbers::pi * d / 8.0;
    mod.points[d] = {std::cos(ang), std::sin(ang)};
  }
  return mod;
}

Modulation make_modulation(const FieldCtx& ctx) {
  if (ctx.q() == 4) return make_qpsk(ctx);
  if (ctx.q() == 8) return make_psk8();
  throw std::invalid_argument("no modulation defined for q = " + std::to_string(ctx.q()));
}

double sigma_from_esn0(double es_n0_db, double rate) {
  if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("rate must be in (0, 1]");
  double gamma = std::pow(10.0, es_n0_db / 10.0);
  return std::sqrt(1.0 / (2.0 * gamma * rate));
}

void transmit(const Modulation& mod, std::span<const int> word, double sigma,
              RngStream& rng, std::vector<double>& out_iq) {
  out_iq.resize(2 * word.size());
  for (size_t i = 0; i < word.size(); ++i) {
    const auto& s = mod.points[word[i]];
    out_iq[2 * i] = s[0] + sigma * rng.gaussian();
    out_iq[2 * i + 1] = s[1] + sigma * rng.gaussian();
  }
}

void llr_point(const Modulation& mod, double yi, double yq, double sigma,
               EmbeddingKind kind, double* out) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  auto d2 = [&](int d) {
    double dx = yi - mod.points[d][0];
    double dy = yq - mod.points[d][1];
    return dx * dx + dy * dy;
  };
  auto clip = [](double v) {
    if (v > tol::llr_clip) return tol::llr_clip;
    if (v < -tol::llr_clip) return -tol::llr_clip;
    return v;
  };
  if (kind == EmbeddingKind::flanagan) {
    double ref = d2(0);
    for (int d = 1; d < mod.q; ++d) out[d - 1] = clip((d2(d) - ref) * inv2s2);
  } else {
    for (int d = 0; d < mod.q; ++d) out[d] = clip(d2(d) * inv2s2);
  }
}

std::vector<double> llr_word(const Modulation& mod, std::span<const double> iq,
                             double sigma, EmbeddingKind kind) {
  size_t n = iq.size() / 2;
  int len = symbol_len(kind, mod.q);
  std::vector<double> out(n * len);
  for (size_t i = 0; i < n; ++i)
    llr_point(mod, iq[2 * i], iq[2 * i + 1], sigma, kind, out.data() + i * len);
  return out;
}

RelativeIsometry make_relative_isometries(const Modulation& mod) {
  RelativeIsometry iso;
  iso.q = mod.q;
  iso.mats.assign(mod.q, {1.0, 0.0, 0.0, 1.0});
  iso.group_compatible = true;

  // anchors: first pair of constellation points with invertible [s_a0 s_a1]
  int a0 = 0, a1 = -1;
  for (int a = 1; a < mod.q; ++a) {
    double det = mod.points[a0][0] * mod.points[a][1] - mod.points[a0][1] * mod.points[a][0];
    if (std::abs(det) > 1e-9) {
      a1 = a;
      break;
    }
  }
  if (a1 < 0) {
    iso.group_compatible = false;
    return iso;
  }
  double s00 = mod.points[a0][0], s01 = mod.points[a0][1];
  double s10 = mod.points[a1][0], s11 = mod.points[a1][1];
  double det = s00 * s11 - s01 * s10;

  for (int beta = 1; beta < mod.q; ++beta) {
    const auto& t0 = mod.points[a0 ^ beta];
    const auto& t1 = mod.points[a1 ^ beta];
    // A [s_a0 s_a1] = [t0 t1]  =>  A = [t0 t1] [s_a0 s_a1]^{-1}
    std::array<double, 4> A;
    A[0] = (t0[0] * s11 - t1[0] * s01) / det;
    A[1] = (t1[0] * s00 - t0[0] * s10) / det;
    A[2] = (t0[1] * s11 - t1[1] * s01) / det;
    A[3] = (t1[1] * s00 - t0[1] * s10) / det;
    iso.mats[beta] = A;

    double g00 = A[0] * A[0] + A[2] * A[2];
    double g01 = A[0] * A[1] + A[2] * A[3];
    double g11 = A[1] * A[1] + A[3] * A[3];
    bool ok = std::abs(g00 - 1) < tol::isometry && std::abs(g11 - 1) < tol::isometry &&
              std::abs(g01) < tol::isometry;
    for (int a = 0; ok && a < mod.q; ++a) {
      double xi = A[0] * mod.points[a][0] + A[1] * mod.points[a][1];
      double xq = A[2] * mod.points[a][0] + A[3] * mod.points[a][1];
      ok = std::abs(xi - mod.points[a ^ beta][0]) < tol::isometry &&
           std::abs(xq - mod.points[a ^ beta][1]) < tol::isometry;
    }
    if (!ok) iso.group_compatible = false;
  }
  return iso;
}

std::array<double, 2> apply_tau(const RelativeIsometry& iso, int beta, double yi,
                                double yq) {
  const auto& A = iso.mats[beta];
  return {A[0] * yi + A[1] * yq, A[2] * yi + A[3] * yq};
}

}  // namespace nbldpc
