#pragma once

// The surface data model: a1 u1^3 + a2 u2^3 + a3 u3^3 = a0 over Z, with its
// projective model a1 x1^3 + a2 x2^3 + a3 x3^3 = a0 x0^3. Normalization,
// Brauer-group classification, the (lambda, mu, nu) parameters of the
// invariant-map table, decomposition groups, and the local-rationality
// shortcut (invariant maps are constant at places where the surface is
// locally rational).

#include <array>
#include <optional>
#include <string>

#include "dcs/symbols.hpp"

namespace dcs {

struct Surface {
    i64 a0 = 1, a1 = 1, a2 = 1, a3 = 1;

    bool valid() const { return a0 && a1 && a2 && a3; }
    std::array<i64, 4> coeffs() const { return {a0, a1, a2, a3}; }
    i64 form_product() const { return checked_mul(checked_mul(a1, a2), a3); }
    bool operator==(const Surface& o) const {
        return a0 == o.a0 && a1 == o.a1 && a2 == o.a2 && a3 == o.a3;
    }
    // CLI order: "a1,a2,a3,a0"
    std::string str() const {
        return std::to_string(a1) + "," + std::to_string(a2) + "," +
               std::to_string(a3) + "," + std::to_string(a0);
    }
};

// Parses "a1,a2,a3,a0". On failure returns nullopt and sets *err_pos to the
// offending character offset.
std::optional<Surface> parse_surface(const std::string& spec, size_t* err_pos = nullptr);

struct Normalized {
    Surface s;                    // gcd-reduced, cube-free coefficients
    std::array<i64, 4> scale{1, 1, 1, 1}; // c_i: raw a_i = c_i^3 * s.a_i (after gcd step)
    i64 gcd_removed = 1;          // factor divided out of all four coefficients
    bool insoluble_by_construction = false; // a prime power divides (a1,a2,a3) but not a0
    i64 insoluble_prime = 0;

    // Transport of an affine point of the raw model to projective coordinates
    // [c0 : c1 u1 : c2 u2 : c3 u3] on the normalized projective surface.
    std::array<i64, 4> transport(i64 u1, i64 u2, i64 u3) const {
        return {scale[0], checked_mul(scale[1], u1), checked_mul(scale[2], u2),
                checked_mul(scale[3], u3)};
    }
};

Normalized normalize(const Surface& raw);

// ---------------------------------------------------------------------------

enum class AlgebraicPart { Trivial, Z3 };

struct BrauerShape {
    AlgebraicPart algebraic = AlgebraicPart::Z3;
    bool transcendental2 = false; // true iff a1 a2 a3 = 2 mod Q*^3
};

// The unordered 2|2 coefficient splittings a_i a_j / (a_h a_l).
std::array<Rational, 3> cross_ratios(const Surface& s);

// Requires cube-free (normalized) coefficients.
BrauerShape brauer_classify(const Surface& s);

// lambda = a1/a0, mu = a2/a0, nu = -a3 a0/(a1 a2); the projective surface in
// the table's coordinates is y0^3 + lambda y1^3 + mu y2^3 + lambda mu nu y3^3 = 0
// with y = (-x0, x1, x2, -x3).
struct TableParams {
    Rational lambda, mu, nu;
};
TableParams table_params(const Surface& s);

enum class DecompGroup { E, T, R, S, Q, G };
std::string decomp_group_name(DecompGroup g);

// Evaluated with is_cube_local on (lambda, nu, lambda/nu, lambda*nu) in Q_p,
// row precedence E > T > R > S > Q > G.
DecompGroup decomposition_group(const TableParams& tp, i64 p);
DecompGroup decomposition_group(const Surface& s, i64 p);

// True iff some cross-ratio is a cube in Q_v (v = 0 for the real place) and
// X has a Q_v point; then every invariant map is constant at v.
bool is_locally_rational(const Surface& s, i64 v);

} // namespace dcs
