#pragma once
#include <cstdint>
#include <vector>

namespace nbldpc {

// Element sets over GF(2^m) as q-bit masks, q <= 256.
struct ElemMask {
  uint64_t w[4] = {0, 0, 0, 0};
  bool contains(int a) const { return (w[a >> 6] >> (a & 63)) & 1; }
  void insert(int a) { w[a >> 6] |= uint64_t(1) << (a & 63); }
  int count() const;
  bool operator==(const ElemMask&) const = default;
};

// GF(2^m) in the integer representation: the element with polynomial
// coefficients (b_1,...,b_m) is the integer sum b_i 2^{i-1}, so b_1 is the
// least significant bit and addition is XOR. Immutable after construction;
// safe to share across threads.
class FieldCtx {
 public:
  // Throws std::invalid_argument if the polynomial has the wrong degree or is
  // not primitive (the xi-power table must cycle through all q-1 nonzero
  // elements before returning to 1).
  FieldCtx(int m, uint32_t primitive_poly);

  static uint32_t default_poly(int m);
  static FieldCtx with_default_poly(int m) { return FieldCtx(m, default_poly(m)); }

  int m() const { return m_; }
  int q() const { return q_; }
  uint32_t primitive_poly() const { return poly_; }
  const std::vector<int>& exp_table() const { return exp_; }
  const std::vector<int>& log_table() const { return log_; }

  int add(int a, int b) const { return a ^ b; }
  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }
  int inv(int a) const;  // throws std::domain_error on a == 0
  int div(int a, int h) const { return mul(a, inv(h)); }

  // k-th coefficient, k in [1, m]; bit(0, k) = 0 for all k
  int bit(int a, int k) const { return (a >> (k - 1)) & 1; }
  std::vector<int> bits(int a) const;

  // B(k, h) = { alpha : bit(h * alpha, k) == 1 }, k in [1, m], h nonzero
  const ElemMask& b_set(int k, int h) const;
  // B~(K, h) = { alpha : parity of bits of (h * alpha) over K is 1 },
  // K a nonempty subset of [1, m] given as a bitmask kappa in [1, q-1]
  const ElemMask& btilde_set(int kappa, int h) const;

  std::vector<int> set_members(const ElemMask& s) const;

 private:
  int m_, q_;
  uint32_t poly_;
  std::vector<int> exp_, log_;
  std::vector<ElemMask> btilde_;  // [(kappa-1) * (q-1) + (h-1)]
};

}  // namespace nbldpc
