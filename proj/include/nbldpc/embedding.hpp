#pragma once
#include <span>
#include <vector>

#include "nbldpc/gf2m.hpp"

namespace nbldpc {

// Two embeddings of field symbols into real vectors:
//   flanagan:        length q-1, indicator of alpha at slot alpha (alpha >= 1),
//                    element 0 maps to the all-zeros vector
//   constant_weight: length q, indicator of alpha at slot alpha, weight 1 always
enum class EmbeddingKind { flanagan, constant_weight };

inline int symbol_len(EmbeddingKind kind, int q) {
  return kind == EmbeddingKind::flanagan ? q - 1 : q;
}

// Flat symbol-major storage: block i occupies [i*len, (i+1)*len). Viewed as a
// matrix, column i is symbol i and row alpha is the embedding coordinate for
// field element alpha (rows 1..q-1 for flanagan, 0..q-1 for constant weight).
struct EmbeddingVec {
  EmbeddingKind kind;
  int q = 0;
  int n_symbols = 0;
  std::vector<double> data;

  int len() const { return symbol_len(kind, q); }
  double* symbol(int i) { return data.data() + size_t(i) * len(); }
  const double* symbol(int i) const { return data.data() + size_t(i) * len(); }
  // row = field element, col = symbol index
  double& at(int row, int col) {
    return data[size_t(col) * len() + row - (kind == EmbeddingKind::flanagan ? 1 : 0)];
  }
  double at(int row, int col) const {
    return data[size_t(col) * len() + row - (kind == EmbeddingKind::flanagan ? 1 : 0)];
  }
};

EmbeddingVec embed_word(const FieldCtx& ctx, EmbeddingKind kind, std::span<const int> word);
void embed_symbol(const FieldCtx& ctx, EmbeddingKind kind, int alpha, double* out);

// Requires every entry within tol::integrality of {0,1} and well-formed
// blocks; throws std::invalid_argument otherwise.
std::vector<int> decode_word(const FieldCtx& ctx, const EmbeddingVec& v);

// Per-symbol argmax rounding, fractional input welcome. Flanagan treats the
// weight complement 1-||block||_1 as slot 0. Ties go to the smaller element.
std::vector<int> round_word(const FieldCtx& ctx, const EmbeddingVec& v);

// argmax over one symbol block with the same tie rule; Flanagan scores element
// 0 as 1 minus the block sum
int round_symbol(EmbeddingKind kind, int q, const double* block);

// (1 - ||f||_1, f) per symbol, and its inverse. flanagan_to_cw throws if a
// symbol's l1 mass exceeds 1 beyond tolerance.
EmbeddingVec flanagan_to_cw(const EmbeddingVec& v);
EmbeddingVec cw_to_flanagan(const EmbeddingVec& v);

// Validity of an integral embedded matrix for the single check h: 0/1 entries,
// column weight <= 1 (flanagan) or == 1 (constant weight), and for every bit
// level k the parity over columns of the B(k, h_j)-sums is even.
bool is_valid_spc_embedding(const FieldCtx& ctx, const EmbeddingVec& F,
                            std::span<const int> h);
// Same but over the full redundant family: every nonempty K via btilde sets.
bool is_valid_spc_embedding_redundant(const FieldCtx& ctx, const EmbeddingVec& F,
                                      std::span<const int> h);

// Constant-weight relative map: block i permuted by alpha -> alpha + c_i.
// Field addition is XOR, so the map is an involution; relative_map(v, c)
// applied twice gives v back. Linear and norm preserving.
EmbeddingVec relative_map(const FieldCtx& ctx, const EmbeddingVec& v,
                          std::span<const int> c);
inline EmbeddingVec relative_unmap(const FieldCtx& ctx, const EmbeddingVec& v,
                                   std::span<const int> c) {
  return relative_map(ctx, v, c);
}

}  // namespace nbldpc
