#pragma once

// Cubic residue characters and the cubic Hilbert symbol (.,.)_w at every
// place of k = Q(w), with values in Z/3 under the fixed identification
// (1/3)Z/Z = Z/3, c <-> c/3.
//
// Tame places (w not over 3): for x = pi^m u with u a unit,
//     (x, y)_w = m_x * chi_w(u_y) - m_y * chi_w(u_x),
// where chi_w(u) = i with u^((q_w - 1)/3) = w^i in the residue field.
// This is the unique bilinear antisymmetric extension of Eq. (2) and
// Eqs. (4)/(5) ("(u,p)_{w,v} = -i") with (pi,pi) = (pi,-pi) + (pi,-1) = 0.
// The wild place uses Eqs. (6)/(7) via Wild3. The complex place gives 0.
//
// The whole set of conventions is pinned jointly by the global reciprocity
// property sum_w (a,b)_w = 0, which the test-suite checks on random S-units.

#include <optional>

#include "dcs/eisenstein.hpp"
#include "dcs/wild.hpp"

namespace dcs {

// Value in (1/3)Z/Z stored as Z/3.
struct InvariantValue {
    int v = 0; // 0,1,2
    InvariantValue() = default;
    explicit InvariantValue(i64 x) : v(int(((x % 3) + 3) % 3)) {}
    InvariantValue operator+(InvariantValue o) const { return InvariantValue(v + o.v); }
    InvariantValue operator-() const { return InvariantValue(-v); }
    InvariantValue operator*(int k) const { return InvariantValue(i64(v) * k); }
    bool operator==(InvariantValue o) const { return v == o.v; }
    bool is_zero() const { return v == 0; }
    std::string str() const { return v == 0 ? "0" : (v == 1 ? "1/3" : "2/3"); }
};

// A local element at a tame place: value = p^val * unit, where the unit is
// represented in the residue field (that is all the tame symbol consumes).
struct TameLocal {
    int val = 0;
    // split: unit in F_p (b unused); inert: a + b*w in F_{p^2}
    u64 a = 0, b = 0;
};

// chi_w on the residue field; w must be Split or Inert.
int cubic_character_residue(const PlaceK& w, u64 a, u64 b);

// chi_w(u) for u a w-adic unit of k.
int cubic_character(const EisRat& u, const PlaceK& w);

// Embed an exact element of k* at a tame place (valuation + residue of the
// unit part).
TameLocal embed_tame(const EisRat& x, const PlaceK& w);

int tame_symbol(const TameLocal& x, const TameLocal& y, const PlaceK& w);

// The cubic Hilbert symbol for exact arguments at any place of k.
InvariantValue hilbert_cubic(const EisRat& a, const EisRat& b, const PlaceK& w,
                             const Wild3& wild = Wild3());

// All places that can carry a nonzero symbol for the pair (a,b): the
// ramified place plus every place where either argument is a non-unit.
std::vector<PlaceK> symbol_support(const EisRat& a, const EisRat& b);

// Sum over a place set; for global a,b with S covering the support this is
// 0 by reciprocity.
InvariantValue sum_over_places(const EisRat& a, const EisRat& b,
                               const std::vector<PlaceK>& S);
InvariantValue sum_over_places(const EisRat& a, const EisRat& b);

// ---------------------------------------------------------------------------
// Cube classes in Q_p and Q.

struct CubeClass {
    i64 place = 0;        // p, or 0 for the real place
    int val_mod3 = 0;     // v_p(x) mod 3
    int unit_char = 0;    // Z/3 character of the unit part (0 where all units are cubes)
    bool is_cube() const { return val_mod3 == 0 && unit_char == 0; }
};

// x != 0 rational; p = 0 means the real place (always a cube).
CubeClass cube_class_local(const Rational& x, i64 p);
bool is_cube_local(const Rational& x, i64 p);

bool is_cube_rational(const Rational& x);
// Reduces every prime exponent mod 3 (sign preserved: -1 is a cube).
Rational cube_free_part(const Rational& x);
i64 cube_free_part(i64 x);

// ---------------------------------------------------------------------------
// Quadratic Hilbert symbol over Q, values in Z/2 (0 = split). Standard
// formulas: at odd p via Legendre symbols, at 2 via epsilon/omega, at the
// real place 1 iff both arguments are negative.
int hilbert_quadratic(const Rational& a, const Rational& b, i64 p /* 0 = real */);

} // namespace dcs
