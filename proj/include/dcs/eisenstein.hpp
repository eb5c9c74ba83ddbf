#pragma once

// Exact arithmetic in Z[w], w^2 + w + 1 = 0, and the places of k = Q(w).
//
// A rational prime p splits in Z[w] when p = 1 mod 3 (two places, one per
// root of x^2+x+1 mod p), stays inert when p = 2 mod 3, and ramifies at
// p = 3 where (3) = (lambda)^2 with lambda = 1 - w, lambda^2 - 3*lambda + 3 = 0.
// The element 2w+1 satisfies (2w+1)^2 = -3.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcs/base.hpp"

namespace dcs {

struct EisensteinInt {
    i64 a = 0, b = 0; // a + b*w

    EisensteinInt() = default;
    EisensteinInt(i64 a_, i64 b_ = 0) : a(a_), b(b_) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const EisensteinInt& o) const { return a == o.a && b == o.b; }

    EisensteinInt operator+(const EisensteinInt& o) const { return {a + o.a, b + o.b}; }
    EisensteinInt operator-(const EisensteinInt& o) const { return {a - o.a, b - o.b}; }
    EisensteinInt operator-() const { return {-a, -b}; }
    // (a+bw)(c+dw) = ac - bd + (ad + bc - bd) w, using w^2 = -1 - w.
    EisensteinInt operator*(const EisensteinInt& o) const {
        return {checked_mul(a, o.a) - checked_mul(b, o.b),
                checked_mul(a, o.b) + checked_mul(b, o.a) - checked_mul(b, o.b)};
    }
    // conj(a+bw) = (a-b) - b*w
    EisensteinInt conj() const { return {a - b, -b}; }
    i128 norm2() const { return i128(a) * a - i128(a) * b + i128(b) * b; }
    i64 norm() const {
        i128 n = norm2();
        if (n > i128(INT64_MAX)) throw std::overflow_error("eisenstein norm");
        return i64(n);
    }
    std::string str() const {
        return std::to_string(a) + (b >= 0 ? "+" : "") + std::to_string(b) + "w";
    }
};

inline const EisensteinInt kOmega{0, 1};
inline const EisensteinInt kLambda{1, -1}; // 1 - w, norm 3

inline EisensteinInt eis_pow(EisensteinInt z, int e) {
    EisensteinInt r{1, 0};
    while (e-- > 0) r = r * z;
    return r;
}

// The six units of Z[w]: +-1, +-w, +-w^2.
inline bool is_unit(const EisensteinInt& z) { return z.norm2() == 1; }

// Element of k = Q(w) as num / den with a rational-integer denominator
// (z/w = z*conj(w)/norm(w), so this loses no generality).
struct EisRat {
    EisensteinInt num;
    i64 den = 1; // > 0

    EisRat() = default;
    EisRat(EisensteinInt n, i64 d = 1) : num(n), den(d) { reduce(); }
    EisRat(i64 n) : num(n, 0), den(1) {}
    EisRat(const Rational& q) : num(q.num, 0), den(q.den) {}

    void reduce() {
        if (den == 0) throw std::domain_error("EisRat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i64 g = gcd64(gcd64(num.a, num.b), den);
        if (g > 1) { num.a /= g; num.b /= g; den /= g; }
    }
    bool is_zero() const { return num.is_zero(); }
    EisRat operator*(const EisRat& o) const { return EisRat{num * o.num, checked_mul(den, o.den)}; }
    EisRat operator/(const EisRat& o) const {
        if (o.is_zero()) throw std::domain_error("EisRat: division by zero");
        EisensteinInt n = num * o.num.conj();
        i64 nn = o.num.norm();
        EisRat r{n * EisensteinInt{o.den, 0}, checked_mul(den, nn)};
        return r;
    }
    EisRat conj() const { return EisRat{num.conj(), den}; }
    std::string str() const { return "(" + num.str() + ")/" + std::to_string(den); }
};

// ---------------------------------------------------------------------------
// Places of k.

enum class PlaceKind { Complex, Split, Inert, Ramified };

struct PlaceK {
    PlaceKind kind = PlaceKind::Complex;
    i64 p = 0;   // rational prime below (0 for the complex place)
    i64 root = 0; // Split only: the chosen root r of x^2+x+1 mod p, in [0,p)

    static PlaceK complex_place() { return {PlaceKind::Complex, 0, 0}; }
    static PlaceK ramified() { return {PlaceKind::Ramified, 3, 0}; }
    static PlaceK inert(i64 p) { return {PlaceKind::Inert, p, 0}; }
    static PlaceK split(i64 p, i64 r) { return {PlaceKind::Split, p, r}; }

    bool operator==(const PlaceK& o) const {
        return kind == o.kind && p == o.p && root == o.root;
    }
    std::string str() const {
        switch (kind) {
            case PlaceKind::Complex: return "oo";
            case PlaceKind::Ramified: return "w3";
            case PlaceKind::Inert: return "w" + std::to_string(p);
            case PlaceKind::Split: return "w" + std::to_string(p) + "," + std::to_string(root);
        }
        return "?";
    }
};

// Both roots of x^2+x+1 mod p for p = 1 mod 3, ascending.
std::vector<i64> omega_roots_mod_p(i64 p);

// Places of k above a rational prime. Split places come root-ascending, the
// smaller root first (the canonical split embedding w -> r).
std::vector<PlaceK> classify_prime(i64 p);

// Normalized w-adic valuation of a nonzero x in k*.
int valuation(const EisRat& x, const PlaceK& w);

// Residue of x at a split place (an element of F_p), defined for v_w(x) >= 0.
i64 residue_split(const EisRat& x, const PlaceK& w);

// Lift of the root of x^2+x+1 mod p to a root mod p^M (Newton).
u64 lift_omega_root(i64 p, i64 r, int M);

} // namespace dcs
