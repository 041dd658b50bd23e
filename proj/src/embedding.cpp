#include "nbldpc/embedding.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "nbldpc/tolerances.hpp"

namespace nbldpc {

void embed_symbol(const FieldCtx& ctx, EmbeddingKind kind, int alpha, double* out) {
  int len = symbol_len(kind, ctx.q());
  std::memset(out, 0, sizeof(double) * len);
  if (kind == EmbeddingKind::flanagan) {
    if (alpha != 0) out[alpha - 1] = 1.0;
  } else {
    out[alpha] = 1.0;
  }
}

EmbeddingVec embed_word(const FieldCtx& ctx, EmbeddingKind kind, std::span<const int> word) {
  EmbeddingVec v{kind, ctx.q(), int(word.size()), {}};
  v.data.assign(size_t(v.len()) * word.size(), 0.0);
  for (size_t i = 0; i < word.size(); ++i) embed_symbol(ctx, kind, word[i], v.symbol(int(i)));
  return v;
}

namespace {

bool near01(double x) {
  return std::abs(x) <= tol::integrality || std::abs(x - 1.0) <= tol::integrality;
}

}  // namespace

std::vector<int> decode_word(const FieldCtx& ctx, const EmbeddingVec& v) {
  std::vector<int> out(v.n_symbols);
  int len = v.len();
  for (int i = 0; i < v.n_symbols; ++i) {
    const double* b = v.symbol(i);
    int found = -1, ones = 0;
    for (int j = 0; j < len; ++j) {
      if (!near01(b[j]))
        throw std::invalid_argument("decode_word on fractional data; round first");
      if (b[j] > 0.5) {
        ++ones;
        found = j;
      }
    }
    if (v.kind == EmbeddingKind::flanagan) {
      if (ones > 1) throw std::invalid_argument("flanagan symbol block with weight > 1");
      out[i] = ones == 0 ? 0 : found + 1;
    } else {
      if (ones != 1) throw std::invalid_argument("constant-weight symbol block must have weight 1");
      out[i] = found;
    }
  }
  return out;
}

int round_symbol(EmbeddingKind kind, int q, const double* b) {
  int len = symbol_len(kind, q);
  double best;
  int arg;
  if (kind == EmbeddingKind::flanagan) {
    double sum = 0.0;
    for (int j = 0; j < len; ++j) sum += b[j];
    best = 1.0 - sum;  // slot for element 0
    arg = 0;
    for (int j = 0; j < len; ++j)
      if (b[j] > best) {
        best = b[j];
        arg = j + 1;
      }
  } else {
    best = b[0];
    arg = 0;
    for (int j = 1; j < len; ++j)
      if (b[j] > best) {
        best = b[j];
        arg = j;
      }
  }
  return arg;
}

std::vector<int> round_word(const FieldCtx&, const EmbeddingVec& v) {
  std::vector<int> out(v.n_symbols);
  for (int i = 0; i < v.n_symbols; ++i)
    out[i] = round_symbol(v.kind, v.q, v.symbol(i));
  return out;
}

EmbeddingVec flanagan_to_cw(const EmbeddingVec& v) {
  if (v.kind != EmbeddingKind::flanagan)
    throw std::invalid_argument("flanagan_to_cw requires flanagan input");
  EmbeddingVec out{EmbeddingKind::constant_weight, v.q, v.n_symbols, {}};
  out.data.assign(size_t(v.q) * v.n_symbols, 0.0);
  int len = v.q - 1;
  for (int i = 0; i < v.n_symbols; ++i) {
    const double* b = v.symbol(i);
    double sum = 0.0;
    for (int j = 0; j < len; ++j) sum += b[j];
    if (sum > 1.0 + tol::feasibility)
      throw std::invalid_argument("flanagan symbol block with l1 mass above 1");
    double* o = out.symbol(i);
    o[0] = 1.0 - sum;
    for (int j = 0; j < len; ++j) o[j + 1] = b[j];
  }
  return out;
}

EmbeddingVec cw_to_flanagan(const EmbeddingVec& v) {
  if (v.kind != EmbeddingKind::constant_weight)
    throw std::invalid_argument("cw_to_flanagan requires constant-weight input");
  EmbeddingVec out{EmbeddingKind::flanagan, v.q, v.n_symbols, {}};
  out.data.assign(size_t(v.q - 1) * v.n_symbols, 0.0);
  for (int i = 0; i < v.n_symbols; ++i) {
    const double* b = v.symbol(i);
    double* o = out.symbol(i);
    for (int j = 1; j < v.q; ++j) o[j - 1] = b[j];
  }
  return out;
}

namespace {

// shared shape/integrality checks; returns rounded 0/1 entries column-major
bool integral_columns(const FieldCtx& ctx, const EmbeddingVec& F,
                      std::span<const int> h, std::vector<int>& rounded) {
  if (int(h.size()) != F.n_symbols)
    throw std::invalid_argument("check length does not match embedded matrix width");
  for (int v : h)
    if (v < 1 || v >= ctx.q()) throw std::invalid_argument("check values must be nonzero");
  int len = F.len();
  rounded.assign(size_t(len) * F.n_symbols, 0);
  for (int j = 0; j < F.n_symbols; ++j) {
    const double* b = F.symbol(j);
    int colsum = 0;
    for (int i = 0; i < len; ++i) {
      if (!near01(b[i])) return false;
      int bit = b[i] > 0.5 ? 1 : 0;
      rounded[size_t(j) * len + i] = bit;
      colsum += bit;
    }
    if (F.kind == EmbeddingKind::flanagan ? colsum > 1 : colsum != 1) return false;
  }
  return true;
}

// parity over columns of the kappa-set sums; rows are field elements >= 1
bool even_parity_family(const FieldCtx& ctx, EmbeddingKind kind,
                        const std::vector<int>& rounded, std::span<const int> h,
                        int kappa) {
  int q = ctx.q();
  int len = symbol_len(kind, q);
  int parity = 0;
  for (size_t j = 0; j < h.size(); ++j) {
    const ElemMask& s = ctx.btilde_set(kappa, h[j]);
    int g = 0;
    for (int a = 1; a < q; ++a)
      if (s.contains(a)) g ^= rounded[j * len + a - (kind == EmbeddingKind::flanagan ? 1 : 0)];
    parity ^= g;
  }
  return parity == 0;
}

}  // namespace

bool is_valid_spc_embedding(const FieldCtx& ctx, const EmbeddingVec& F,
                            std::span<const int> h) {
  std::vector<int> rounded;
  if (!integral_columns(ctx, F, h, rounded)) return false;
  for (int k = 1; k <= ctx.m(); ++k)
    if (!even_parity_family(ctx, F.kind, rounded, h, 1 << (k - 1))) return false;
  return true;
}

bool is_valid_spc_embedding_redundant(const FieldCtx& ctx, const EmbeddingVec& F,
                                      std::span<const int> h) {
  std::vector<int> rounded;
  if (!integral_columns(ctx, F, h, rounded)) return false;
  for (int kappa = 1; kappa < ctx.q(); ++kappa)
    if (!even_parity_family(ctx, F.kind, rounded, h, kappa)) return false;
  return true;
}

EmbeddingVec relative_map(const FieldCtx& ctx, const EmbeddingVec& v,
                          std::span<const int> c) {
  if (v.kind != EmbeddingKind::constant_weight)
    throw std::invalid_argument("relative map is defined on constant-weight vectors");
  if (int(c.size()) != v.n_symbols)
    throw std::invalid_argument("relative word length mismatch");
  EmbeddingVec out{v.kind, v.q, v.n_symbols, std::vector<double>(v.data.size())};
  for (int i = 0; i < v.n_symbols; ++i) {
    const double* src = v.symbol(i);
    double* dst = out.symbol(i);
    for (int a = 0; a < v.q; ++a) dst[a] = src[ctx.add(a, c[i])];
  }
  return out;
}

}  // namespace nbldpc
