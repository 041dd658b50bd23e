#pragma once
#include <string>
#include <vector>

#include "nbldpc/embedding.hpp"
#include "nbldpc/gf2m.hpp"

namespace nbldpc {

// Sparse parity-check matrix over GF(2^m). Stored values are always nonzero.
struct NonbinaryCode {
  int n = 0;       // variables (symbols)
  int mcheck = 0;  // checks (rows)
  int q = 2;
  struct Entry {
    int col;
    int val;
  };
  std::vector<std::vector<Entry>> rows;  // per check, ordered by col
  std::vector<int> var_degree;
  std::vector<int> check_degree;

  int field_m() const;
};

// Text format, whitespace separated, '#' starts a comment:
//   line 1: N M q
//   line 2: max_var_degree max_check_degree
//   line 3: N variable degrees
//   line 4: M check degrees
//   next N lines: variable adjacency as row:value pairs, 1-indexed rows
//   next M lines: check adjacency as col:value pairs, 1-indexed cols
// Both adjacency blocks are present; they must agree.
NonbinaryCode load_code(const std::string& path);
void save_code(const NonbinaryCode& code, const std::string& path,
               const std::string& comment = "");

// Copies the support of `binary` (any stored values) and sets every nonzero
// entry to `value` in GF(q).
NonbinaryCode derive_from_binary(const NonbinaryCode& binary, int q, int value);

bool syndrome_ok(const FieldCtx& ctx, const NonbinaryCode& code,
                 std::span<const int> word);

// rank of the 0/1-lifted support over GF(2); for subfield-valued matrices this
// equals the GF(2^m) rank, which fixes the code dimension label
int gf2_rank_of_support(const NonbinaryCode& code);

// Per-check derived structure. For replica index kappa in [1, q-1] and check
// position p, the gather list holds the 2^{m-1} flat x-coordinates whose sum
// is the kappa-image of position p. Built per embedding kind because the flat
// layout stride differs. to_norm/from_norm are the per-position permutations
// between original coordinates and the all-ones normalized ones.
struct CheckContext {
  int dc = 0;
  std::vector<int> cols;
  std::vector<int> vals;
  int gather_width = 0;  // 2^{m-1}
  // [(kappa-1)*dc + p] * gather_width entries
  std::vector<int32_t> gather;
  // per position p: block-local permutations, length = symbol_len(kind, q)
  std::vector<int32_t> to_norm;    // normalized[i] = original[to_norm[p][i]]
  std::vector<int32_t> from_norm;  // original[i] = normalized[from_norm[p][i]]
  const int32_t* gather_list(int kappa, int p) const {
    return gather.data() + (size_t(kappa - 1) * dc + p) * gather_width;
  }
  const int32_t* to_norm_at(int p, int len) const { return to_norm.data() + size_t(p) * len; }
  const int32_t* from_norm_at(int p, int len) const { return from_norm.data() + size_t(p) * len; }
};

std::vector<CheckContext> build_check_contexts(const FieldCtx& ctx,
                                               const NonbinaryCode& code,
                                               EmbeddingKind kind);

}  // namespace nbldpc
