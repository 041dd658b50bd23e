#include "nbldpc/code_model.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nbldpc {

int NonbinaryCode::field_m() const {
  int m = std::countr_zero(unsigned(q));
  if (q < 2 || (1 << m) != q) throw std::logic_error("q is not a power of two");
  return m;
}

namespace {

struct TokenReader {
  std::istream& in;
  int line = 0;
  std::istringstream cur;

  explicit TokenReader(std::istream& s) : in(s) {}

  bool next_token(std::string& tok) {
    while (true) {
      if (cur >> tok) {
        if (tok[0] == '#') {
          cur.str("");
          cur.clear();
          continue;
        }
        return true;
      }
      std::string ln;
      if (!std::getline(in, ln)) return false;
      ++line;
      auto hash = ln.find('#');
      if (hash != std::string::npos) ln.resize(hash);
      cur.str(ln);
      cur.clear();
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("parse error at line " + std::to_string(line) + ": " + what);
  }

  long read_int(const std::string& what, long lo, long hi) {
    std::string tok;
    if (!next_token(tok)) fail("unexpected end of file reading " + what);
    size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (...) {
      fail("expected integer for " + what + ", got '" + tok + "'");
    }
    if (pos != tok.size()) fail("expected integer for " + what + ", got '" + tok + "'");
    if (v < lo || v > hi)
      fail(what + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
           std::to_string(hi) + "]");
    return v;
  }

  // index:value with 1-based index
  std::pair<int, int> read_pair(const std::string& what, long idx_hi, long val_hi) {
    std::string tok;
    if (!next_token(tok)) fail("unexpected end of file reading " + what);
    auto colon = tok.find(':');
    if (colon == std::string::npos) fail(what + " must be index:value, got '" + tok + "'");
    long idx = 0, val = 0;
    try {
      idx = std::stol(tok.substr(0, colon));
      val = std::stol(tok.substr(colon + 1));
    } catch (...) {
      fail(what + " must be index:value, got '" + tok + "'");
    }
    if (idx < 1 || idx > idx_hi) fail(what + " index " + std::to_string(idx) + " out of range");
    if (val < 1 || val > val_hi)
      fail(what + " value " + std::to_string(val) + " outside [1, q-1]");
    return {int(idx), int(val)};
  }
};

}  // namespace

NonbinaryCode load_code(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open code file: " + path);
  TokenReader r(f);

  NonbinaryCode code;
  code.n = int(r.read_int("N", 1, 1 << 24));
  code.mcheck = int(r.read_int("M", 1, 1 << 24));
  code.q = int(r.read_int("q", 2, 256));
  if (std::popcount(unsigned(code.q)) != 1) r.fail("q must be a power of two");
  int max_dv = int(r.read_int("max_var_degree", 1, code.mcheck));
  int max_dc = int(r.read_int("max_check_degree", 1, code.n));

  code.var_degree.resize(code.n);
  for (int i = 0; i < code.n; ++i)
    code.var_degree[i] = int(r.read_int("variable degree", 0, max_dv));
  code.check_degree.resize(code.mcheck);
  for (int j = 0; j < code.mcheck; ++j)
    code.check_degree[j] = int(r.read_int("check degree", 1, max_dc));

  // variable adjacency: (row, value) per variable
  std::vector<std::vector<NonbinaryCode::Entry>> var_adj(code.n);
  for (int i = 0; i < code.n; ++i) {
    var_adj[i].resize(code.var_degree[i]);
    for (int k = 0; k < code.var_degree[i]; ++k) {
      auto [row, val] = r.read_pair("variable adjacency", code.mcheck, code.q - 1);
      var_adj[i][k] = {row - 1, val};
    }
  }
  // check adjacency: (col, value) per check
  code.rows.resize(code.mcheck);
  for (int j = 0; j < code.mcheck; ++j) {
    code.rows[j].resize(code.check_degree[j]);
    for (int k = 0; k < code.check_degree[j]; ++k) {
      auto [col, val] = r.read_pair("check adjacency", code.n, code.q - 1);
      code.rows[j][k] = {col - 1, val};
    }
    std::sort(code.rows[j].begin(), code.rows[j].end(),
              [](auto& a, auto& b) { return a.col < b.col; });
    for (size_t k = 1; k < code.rows[j].size(); ++k)
      if (code.rows[j][k].col == code.rows[j][k - 1].col)
        r.fail("duplicate column in check " + std::to_string(j + 1));
  }

  // the two adjacency blocks must describe the same matrix
  std::vector<std::vector<NonbinaryCode::Entry>> from_rows(code.n);
  for (int j = 0; j < code.mcheck; ++j)
    for (auto& e : code.rows[j]) from_rows[e.col].push_back({j, e.val});
  for (int i = 0; i < code.n; ++i) {
    auto a = var_adj[i];
    auto b = from_rows[i];
    auto by_col = [](auto& x, auto& y) { return x.col < y.col; };
    std::sort(a.begin(), a.end(), by_col);
    std::sort(b.begin(), b.end(), by_col);
    bool same = a.size() == b.size();
    for (size_t k = 0; same && k < a.size(); ++k)
      same = a[k].col == b[k].col && a[k].val == b[k].val;
    if (!same)
      throw std::runtime_error("adjacency blocks disagree at variable " +
                               std::to_string(i + 1));
  }
  return code;
}

void save_code(const NonbinaryCode& code, const std::string& path,
               const std::string& comment) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write code file: " + path);
  if (!comment.empty()) f << "# " << comment << "\n";
  int max_dv = *std::max_element(code.var_degree.begin(), code.var_degree.end());
  int max_dc = *std::max_element(code.check_degree.begin(), code.check_degree.end());
  f << code.n << " " << code.mcheck << " " << code.q << "\n";
  f << max_dv << " " << max_dc << "\n";
  for (int i = 0; i < code.n; ++i) f << code.var_degree[i] << (i + 1 < code.n ? " " : "\n");
  for (int j = 0; j < code.mcheck; ++j)
    f << code.check_degree[j] << (j + 1 < code.mcheck ? " " : "\n");
  std::vector<std::vector<NonbinaryCode::Entry>> var_adj(code.n);
  for (int j = 0; j < code.mcheck; ++j)
    for (auto& e : code.rows[j]) var_adj[e.col].push_back({j, e.val});
  for (int i = 0; i < code.n; ++i) {
    for (size_t k = 0; k < var_adj[i].size(); ++k)
      f << var_adj[i][k].col + 1 << ":" << var_adj[i][k].val
        << (k + 1 < var_adj[i].size() ? " " : "");
    f << "\n";
  }
  for (int j = 0; j < code.mcheck; ++j) {
    for (size_t k = 0; k < code.rows[j].size(); ++k)
      f << code.rows[j][k].col + 1 << ":" << code.rows[j][k].val
        << (k + 1 < code.rows[j].size() ? " " : "");
    f << "\n";
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

NonbinaryCode derive_from_binary(const NonbinaryCode& binary, int q, int value) {
  if (value < 1 || value >= q) throw std::invalid_argument("check value must be in [1, q-1]");
  NonbinaryCode out = binary;
  out.q = q;
  for (auto& row : out.rows)
    for (auto& e : row) e.val = value;
  return out;
}

bool syndrome_ok(const FieldCtx& ctx, const NonbinaryCode& code,
                 std::span<const int> word) {
  for (const auto& row : code.rows) {
    int acc = 0;
    for (const auto& e : row) acc ^= ctx.mul(e.val, word[e.col]);
    if (acc != 0) return false;
  }
  return true;
}

int gf2_rank_of_support(const NonbinaryCode& code) {
  int words = (code.n + 63) / 64;
  std::vector<std::vector<uint64_t>> rows(code.mcheck, std::vector<uint64_t>(words, 0));
  for (int j = 0; j < code.mcheck; ++j)
    for (auto& e : code.rows[j]) rows[j][e.col >> 6] ^= uint64_t(1) << (e.col & 63);
  int rank = 0;
  int pivot_row = 0;
  for (int c = 0; c < code.n && pivot_row < code.mcheck; ++c) {
    int sel = -1;
    for (int r = pivot_row; r < code.mcheck; ++r)
      if ((rows[r][c >> 6] >> (c & 63)) & 1) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[sel], rows[pivot_row]);
    for (int r = 0; r < code.mcheck; ++r)
      if (r != pivot_row && ((rows[r][c >> 6] >> (c & 63)) & 1))
        for (int w = 0; w < words; ++w) rows[r][w] ^= rows[pivot_row][w];
    ++pivot_row;
    ++rank;
  }
  return rank;
}

std::vector<CheckContext> build_check_contexts(const FieldCtx& ctx,
                                               const NonbinaryCode& code,
                                               EmbeddingKind kind) {
  if (ctx.q() != code.q) throw std::invalid_argument("field context does not match code q");
  int q = code.q;
  int len = symbol_len(kind, q);
  int gw = q / 2;  // |B~(K, h)| = 2^{m-1} for every nonzero h
  int coord0 = kind == EmbeddingKind::flanagan ? 1 : 0;

  std::vector<CheckContext> out(code.mcheck);
  for (int j = 0; j < code.mcheck; ++j) {
    CheckContext& cc = out[j];
    cc.dc = code.check_degree[j];
    cc.gather_width = gw;
    cc.cols.reserve(cc.dc);
    cc.vals.reserve(cc.dc);
    for (auto& e : code.rows[j]) {
      cc.cols.push_back(e.col);
      cc.vals.push_back(e.val);
    }
    cc.gather.assign(size_t(q - 1) * cc.dc * gw, 0);
    for (int kappa = 1; kappa < q; ++kappa)
      for (int p = 0; p < cc.dc; ++p) {
        const ElemMask& s = ctx.btilde_set(kappa, cc.vals[p]);
        int32_t* dst = cc.gather.data() + (size_t(kappa - 1) * cc.dc + p) * gw;
        int w = 0;
        for (int a = 1; a < q; ++a)
          if (s.contains(a)) dst[w++] = int32_t(size_t(cc.cols[p]) * len + a - coord0);
        if (w != gw) throw std::logic_error("gather width mismatch");
      }
    cc.to_norm.resize(size_t(cc.dc) * len);
    cc.from_norm.resize(size_t(cc.dc) * len);
    for (int p = 0; p < cc.dc; ++p) {
      int h = cc.vals[p];
      for (int i = coord0; i < q; ++i) {
        cc.to_norm[size_t(p) * len + i - coord0] = int32_t(ctx.div(i, h) - coord0);
        cc.from_norm[size_t(p) * len + i - coord0] = int32_t(ctx.mul(i, h) - coord0);
      }
    }
  }
  return out;
}

}  // namespace nbldpc
