#pragma once

// Small exact-arithmetic utilities shared by every module. All arithmetic in
// this project is over Z or Q; there is no floating point anywhere.

#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dcs {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Raised when a p-adic computation cannot be completed at the working
// precision. Callers re-sample / lift to higher precision and retry.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

inline i64 checked_mul(i64 a, i64 b) {
    i128 p = i128(a) * b;
    if (p > i128(INT64_MAX) || p < i128(INT64_MIN)) throw std::overflow_error("i64 mul");
    return i64(p);
}

inline i64 iabs(i64 a) { return a < 0 ? -a : a; }

inline i64 gcd64(i64 a, i64 b) { return std::gcd(iabs(a), iabs(b)); }

// v_p(n) for n != 0.
inline int valuation_int(i64 n, i64 p) {
    assert(n != 0 && p >= 2);
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod m for gcd(a,m)=1.
inline u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = i64(m), nr = i64(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    if (t < 0) t += i64(m);
    return u64(t);
}

inline u64 ipow_u64(u64 b, int e) {
    u64 r = 1;
    while (e-- > 0) {
        if (b != 0 && r > UINT64_MAX / b) throw std::overflow_error("ipow");
        r *= b;
    }
    return r;
}

// Exact reduced fraction with i64 components; denominators stay positive.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {}
    Rational(i64 n, i64 d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i64 g = gcd64(num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    Rational operator*(const Rational& o) const {
        i64 g1 = gcd64(num, o.den), g2 = gcd64(o.num, den);
        return Rational{checked_mul(num / g1, o.num / g2), checked_mul(den / g2, o.den / g1)};
    }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::domain_error("Rational: division by zero");
        return *this * Rational{o.den, o.num};
    }
    Rational operator+(const Rational& o) const {
        return Rational{checked_mul(num, o.den) + checked_mul(o.num, den), checked_mul(den, o.den)};
    }
    Rational operator-() const { return Rational{-num, den}; }
    Rational operator-(const Rational& o) const { return *this + (-o); }

    // v_p of a nonzero rational.
    int valuation(i64 p) const {
        assert(num != 0);
        return valuation_int(num, p) - valuation_int(den, p);
    }
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Deterministic xorshift-style generator; all sampling in the project is
// seeded so identical inputs produce identical outputs.
struct Rng {
    u64 s;
    explicit Rng(u64 seed = 0x9e3779b97f4a7c15ull) : s(seed ? seed : 1) {}
    u64 next() {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        return s;
    }
    u64 below(u64 n) { return n ? next() % n : 0; }
    i64 range(i64 lo, i64 hi) { return lo + i64(below(u64(hi - lo + 1))); }
};

} // namespace dcs
