#include "nbldpc/gf2m.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace nbldpc {

int ElemMask::count() const {
  return std::popcount(w[0]) + std::popcount(w[1]) + std::popcount(w[2]) +
         std::popcount(w[3]);
}

uint32_t FieldCtx::default_poly(int m) {
  // x+1, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, x^7+x^3+1,
  // x^8+x^4+x^3+x^2+1
  static constexpr uint32_t polys[9] = {0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D};
  if (m < 1 || m > 8) throw std::invalid_argument("field exponent m must be in [1, 8]");
  return polys[m];
}

FieldCtx::FieldCtx(int m, uint32_t primitive_poly) : m_(m), poly_(primitive_poly) {
  if (m < 1 || m > 8) throw std::invalid_argument("field exponent m must be in [1, 8]");
  q_ = 1 << m;
  if (poly_ < uint32_t(q_) || poly_ >= uint32_t(2 * q_))
    throw std::invalid_argument("polynomial degree is not " + std::to_string(m));

  exp_.assign(q_ - 1, 0);
  log_.assign(q_, -1);
  int v = 1;
  for (int i = 0; i < q_ - 1; ++i) {
    if (log_[v] != -1)
      throw std::invalid_argument(
          "polynomial not primitive: table cycle length " + std::to_string(i) +
          " < " + std::to_string(q_ - 1));
    exp_[i] = v;
    log_[v] = i;
    v <<= 1;
    if (v & q_) v ^= int(poly_);
  }
  if (v != 1)
    throw std::invalid_argument("polynomial not primitive: xi^" +
                                std::to_string(q_ - 1) + " != 1");

  // btilde_[(kappa-1)*(q-1) + (h-1)]; b_set(k,h) is the kappa = 1<<(k-1) slice
  btilde_.assign(size_t(q_ - 1) * (q_ - 1), ElemMask{});
  for (int kappa = 1; kappa < q_; ++kappa)
    for (int h = 1; h < q_; ++h) {
      ElemMask& s = btilde_[size_t(kappa - 1) * (q_ - 1) + (h - 1)];
      for (int a = 1; a < q_; ++a)
        if (std::popcount(unsigned(mul(h, a) & kappa)) & 1) s.insert(a);
    }
}

int FieldCtx::inv(int a) const {
  if (a == 0) throw std::domain_error("division by zero field element");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::vector<int> FieldCtx::bits(int a) const {
  std::vector<int> out(m_);
  for (int k = 1; k <= m_; ++k) out[k - 1] = bit(a, k);
  return out;
}

const ElemMask& FieldCtx::b_set(int k, int h) const {
  if (k < 1 || k > m_) throw std::out_of_range("bit index k outside [1, m]");
  return btilde_set(1 << (k - 1), h);
}

const ElemMask& FieldCtx::btilde_set(int kappa, int h) const {
  if (kappa < 1 || kappa >= q_) throw std::out_of_range("subset mask outside [1, q-1]");
  if (h < 1 || h >= q_) throw std::domain_error("set rotation requires nonzero h");
  return btilde_[size_t(kappa - 1) * (q_ - 1) + (h - 1)];
}

std::vector<int> FieldCtx::set_members(const ElemMask& s) const {
  std::vector<int> out;
  for (int a = 0; a < q_; ++a)
    if (s.contains(a)) out.push_back(a);
  return out;
}

}  // namespace nbldpc
