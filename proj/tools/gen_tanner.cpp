// Quasi-cyclic (3,5) codes from multiplicative shift orbits: a 3 x 5 array of
// p x p circulants where block (j,l) is the identity rotated by b^j a^l mod p,
// with ord(a) = 5 and ord(b) = 3. Requires p prime, p = 1 (mod 15).
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbldpc/code_model.hpp"
#include "nbldpc/rng.hpp"
#include "nbldpc/sim.hpp"

using namespace nbldpc;

namespace {

int64_t powmod(int64_t g, int64_t e, int64_t p) {
  int64_t r = 1;
  g %= p;
  while (e) {
    if (e & 1) r = r * g % p;
    g = g * g % p;
    e >>= 1;
  }
  return r;
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; int64_t(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// smallest element of exact order `ord` (the minimum over one orbit is the
// minimum over all of them: the order-`ord` elements form a single cycle)
int find_order_element(int p, int ord) {
  for (int g = 2; g < p; ++g) {
    const int c = int(powmod(g, (p - 1) / ord, p));
    if (c == 1) continue;
    int best = c, x = c;
    for (int k = 1; k < ord; ++k) {
      x = int(int64_t(x) * c % p);
      if (x != 1 && x < best) best = x;
    }
    return best;
  }
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate a quasi-cyclic (3,5) parity-check matrix over GF(q)"};
  int p = 211, q = 4;
  uint64_t seed = 1;
  std::string values = "ones", out;
  app.add_option("--p", p, "circulant size, prime with p = 1 (mod 15)")->required();
  app.add_option("--q", q, "field size (power of 2)");
  app.add_option("--values", values, "ones | random (seeded uniform nonzero)");
  app.add_option("--seed", seed, "seed for --values random");
  app.add_option("--out", out, "output code file")->required();
  CLI11_PARSE(app, argc, argv);

  if (!is_prime(p) || (p - 1) % 15 != 0) {
    std::fprintf(stderr, "p must be prime with 15 | p-1\n");
    return 1;
  }
  if (values != "ones" && values != "random") {
    std::fprintf(stderr, "unknown --values mode\n");
    return 1;
  }

  const int a = find_order_element(p, 5);
  const int b = find_order_element(p, 3);

  NonbinaryCode code;
  code.n = 5 * p;
  code.mcheck = 3 * p;
  code.q = q;
  code.rows.resize(code.mcheck);
  RngStream rng(seed, 0);
  auto draw_val = [&]() -> int {
    if (values == "ones") return 1;
    return 1 + int(rng.uniform01() * (q - 1));
  };
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 5; ++l) {
      const int shift = int(int64_t(powmod(b, j, p)) * powmod(a, l, p) % p);
      for (int r = 0; r < p; ++r)
        code.rows[j * p + r].push_back({l * p + (r + shift) % p, draw_val()});
    }
  for (auto& row : code.rows)
    std::sort(row.begin(), row.end(),
              [](const NonbinaryCode::Entry& x, const NonbinaryCode::Entry& y) {
                return x.col < y.col;
              });
  code.check_degree.assign(code.mcheck, 5);
  code.var_degree.assign(code.n, 3);

  const FieldCtx ctx = FieldCtx::with_default_poly(code.field_m());
  const int rank2 = gf2_rank_of_support(code);
  const double rate = code_rate(ctx, code);
  const int k = int(rate * code.n + 0.5);
  char comment[256];
  std::snprintf(comment, sizeof(comment),
                "qc (3,5) p=%d a=%d b=%d q=%d values=%s n=%d k=%d rank_gf2=%d", p, a, b, q,
                values.c_str(), code.n, k, rank2);
  save_code(code, out, comment);
  std::printf("%s -> %s\n", comment, out.c_str());
  return 0;
}
