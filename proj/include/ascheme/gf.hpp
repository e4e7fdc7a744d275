#pragma once

#include <array>

#include "ascheme/common.hpp"

namespace ascheme {

// GF(p^3) in the polynomial basis modulo a monic irreducible cubic
// x^3 + t2 x^2 + t1 x + t0. Elements are encoded c0 + c1*p + c2*p^2.
class Gfp3 {
 public:
  Gfp3(int p, std::array<int, 3> tail) : p_(p), tail_(tail) {
    if (!is_prime(p_)) throw Error("Gfp3: p must be prime");
    for (int& c : tail_) c = ((c % p_) + p_) % p_;
    if (!irreducible()) throw Error("Gfp3: modulus is reducible");
    q_ = p_ * p_ * p_;
  }

  // Default modulus per the fixed table; other primes take the first monic
  // irreducible cubic in lexicographic (t2, t1, t0) order.
  static Gfp3 with_default_modulus(int p) {
    if (p == 2) return Gfp3(2, {1, 1, 0});
    if (p == 3) return Gfp3(3, {1, 2, 0});
    if (p == 5) return Gfp3(5, {1, 1, 0});
    if (!is_prime(p)) throw Error("Gfp3: p must be prime");
    for (int t2 = 0; t2 < p; ++t2)
      for (int t1 = 0; t1 < p; ++t1)
        for (int t0 = 0; t0 < p; ++t0) {
          Gfp3 f(p, {t0, t1, t2}, no_check{});
          if (f.irreducible()) return Gfp3(p, {t0, t1, t2});
        }
    throw Error("Gfp3: no irreducible cubic found");  // unreachable for prime p
  }

  int p() const { return p_; }
  int q() const { return q_; }
  std::array<int, 3> modulus_tail() const { return tail_; }

  int from_coeffs(int c0, int c1, int c2) const {
    return mod(c0) + mod(c1) * p_ + mod(c2) * p_ * p_;
  }
  int coeff(int a, int i) const { return (a / pow_p(i)) % p_; }

  int add(int a, int b) const {
    return from_coeffs(coeff(a, 0) + coeff(b, 0), coeff(a, 1) + coeff(b, 1),
                       coeff(a, 2) + coeff(b, 2));
  }
  int neg(int a) const { return from_coeffs(-coeff(a, 0), -coeff(a, 1), -coeff(a, 2)); }
  int sub(int a, int b) const { return add(a, neg(b)); }

  int mul(int a, int b) const {
    // Schoolbook product, then reduce degrees 4 and 3.
    std::array<long long, 5> c{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[i + j] += static_cast<long long>(coeff(a, i)) * coeff(b, j);
    for (int d = 4; d >= 3; --d) {
      long long top = c[d] % p_;
      c[d] = 0;
      c[d - 1] -= top * tail_[2];
      c[d - 2] -= top * tail_[1];
      c[d - 3] -= top * tail_[0];
    }
    return from_coeffs(static_cast<int>(c[0] % p_), static_cast<int>(c[1] % p_),
                       static_cast<int>(c[2] % p_));
  }

  int pow(int a, long long e) const {
    int acc = one();
    int base = a;
    for (; e > 0; e >>= 1) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
    }
    return acc;
  }

  int inv(int a) const {
    if (a == 0) throw Error("Gfp3: zero has no inverse");
    return pow(a, q_ - 2);
  }

  int zero() const { return 0; }
  int one() const { return 1; }

  // The image of y -> y^(p-1) on the units: the unique multiplicative
  // subgroup of order p^2 + p + 1.
  std::vector<int> norm_one_subgroup() const {
    std::vector<int> k;
    for (int y = 1; y < q_; ++y) set_insert(k, pow(y, p_ - 1));
    if (static_cast<int>(k.size()) != p_ * p_ + p_ + 1)
      throw Error("Gfp3: subgroup of order p^2+p+1 has wrong size");
    return k;
  }

 private:
  struct no_check {};
  Gfp3(int p, std::array<int, 3> tail, no_check) : p_(p), tail_(tail), q_(p * p * p) {}

  int mod(int v) const { return ((v % p_) + p_) % p_; }
  int pow_p(int i) const {
    int r = 1;
    while (i-- > 0) r *= p_;
    return r;
  }

  // A cubic with no root in GF(p) has no linear factor, hence is irreducible.
  bool irreducible() const {
    for (int x = 0; x < p_; ++x) {
      long long v = ((static_cast<long long>(x) * x % p_ * x) + tail_[2] * x * x + tail_[1] * x +
                     tail_[0]) %
                    p_;
      if (v == 0) return false;
    }
    return true;
  }

  int p_;
  std::array<int, 3> tail_;
  int q_ = 0;
};

}  // namespace ascheme
