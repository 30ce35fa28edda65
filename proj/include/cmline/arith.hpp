#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cmline {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Floor division for signed integers.
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Nonnegative remainder.
inline i64 mod_floor(i64 a, i64 b) {
  i64 r = a % b;
  return r < 0 ? r + (b < 0 ? -b : b) : r;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<i64, i64, i64> ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
    std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
    std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline std::tuple<mpz_class, mpz_class, mpz_class> ext_gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {g, x, y};
}

inline i64 lcm64(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

inline i64 euler_phi(i64 n) {
  i64 result = n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> small, large;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline int moebius(i64 n) {
  int mu = 1;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

/// Squarefree kernel of a nonzero integer, sign kept: 12 -> 3, -8 -> -2.
inline mpz_class squarefree_part(mpz_class n) {
  if (n == 0) throw std::invalid_argument("squarefree_part of zero");
  int sign = sgn(n);
  n = abs(n);
  mpz_class out = 1;
  for (mpz_class p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2 == 1) out *= p;
  }
  out *= n;
  return sign * out;
}

/// Squarefree kernel of a nonzero rational, i.e. of num*den.
inline mpz_class squarefree_part(const mpq_class& q) {
  return squarefree_part(mpz_class(q.get_num() * q.get_den()));
}

inline std::string to_string(const mpz_class& z) { return z.get_str(); }
inline std::string to_string(const mpq_class& q) { return q.get_str(); }

/// Parses "a" or "a/b" into a canonical rational.
inline mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a word-sized prime.

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Largest prime p < 2^61 with p = 1 (mod k), skipping the first `skip` hits.
inline u64 prime_one_mod(u64 k, int skip = 0) {
  u64 top = (1ull << 61);
  u64 p = top - (top % k) + 1;
  if (p >= top) p -= k;
  for (; p > k; p -= k) {
    if (is_prime_u64(p) && skip-- == 0) return p;
  }
  throw std::runtime_error("no prime found");
}

/// Element of exact multiplicative order k in F_p (requires k | p-1).
inline u64 element_of_order(u64 k, u64 p) {
  auto factors = prime_factors(static_cast<i64>(k));
  for (u64 g = 2; g < p; ++g) {
    u64 z = powmod(g, (p - 1) / k, p);
    bool ok = true;
    for (i64 q : factors) {
      if (powmod(z, k / static_cast<u64>(q), p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return z;
  }
  throw std::runtime_error("no element of requested order");
}

/// Element of the prime field F_p. Carries its modulus; a default-constructed
/// value (p == 0) is a modulus-free zero that adopts the other operand's p.
struct ModInt {
  u64 v = 0;
  u64 p = 0;

  ModInt() = default;
  ModInt(u64 value, u64 modulus) : v(value % modulus), p(modulus) {}
  static ModInt from_signed(i64 x, u64 modulus) {
    i64 r = x % static_cast<i64>(modulus);
    if (r < 0) r += static_cast<i64>(modulus);
    return ModInt(static_cast<u64>(r), modulus);
  }
  static ModInt from_mpz(const mpz_class& x, u64 modulus) {
    static_assert(sizeof(unsigned long) == sizeof(u64));
    return ModInt(mpz_fdiv_ui(x.get_mpz_t(), modulus), modulus);
  }

  bool is_zero() const { return v == 0; }
  friend bool operator==(const ModInt& a, const ModInt& b) { return a.v == b.v; }

  friend ModInt operator+(ModInt a, const ModInt& b) {
    u64 p = a.p ? a.p : b.p;
    u64 s = a.v + b.v;
    if (s >= p && p) s -= p;
    return {s, p, 0};
  }
  friend ModInt operator-(ModInt a, const ModInt& b) {
    u64 p = a.p ? a.p : b.p;
    u64 s = a.v >= b.v ? a.v - b.v : a.v + p - b.v;
    return {s, p, 0};
  }
  friend ModInt operator-(const ModInt& a) { return {a.v ? a.p - a.v : 0, a.p, 0}; }
  friend ModInt operator*(const ModInt& a, const ModInt& b) {
    u64 p = a.p ? a.p : b.p;
    if (!p) return {};
    return {mulmod(a.v, b.v, p), p, 0};
  }
  ModInt& operator+=(const ModInt& b) { return *this = *this + b; }
  ModInt& operator-=(const ModInt& b) { return *this = *this - b; }
  ModInt& operator*=(const ModInt& b) { return *this = *this * b; }

  ModInt inverse() const {
    if (v == 0) throw std::domain_error("ModInt: inverse of zero");
    return {powmod(v, p - 2, p), p, 0};
  }
  friend ModInt operator/(const ModInt& a, const ModInt& b) { return a * b.inverse(); }

 private:
  // Unchecked constructor for already-reduced values.
  ModInt(u64 value, u64 modulus, int) : v(value), p(modulus) {}
};

}  // namespace cmline
