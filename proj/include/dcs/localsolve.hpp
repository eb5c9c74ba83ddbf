#pragma once

// Certified local solubility of the integral model at every place, affine
// point sampling at prescribed p-adic precision, and brute-force integral
// point search (the global oracle).
//
// Decision procedure at p: breadth-first refinement of residues
// (u1,u2,u3) mod p^j with F = a1 u1^3 + a2 u2^3 + a3 u3^3 - a0 = 0 mod p^j.
// A node with v_p(dF/du_i) = t and j >= 2t+1 is a Hensel witness (Soluble);
// a level with no surviving nodes proves Insoluble, since any true Z_p point
// would reduce onto the tree. Witnessed coordinates use the one-variable
// Newton iteration with the remaining coordinates frozen at their integer
// representatives.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dcs/surface.hpp"

namespace dcs {

struct LocalPointX {
    i64 p = 0;
    int N = 0;                      // coordinates are classes mod p^N
    std::array<u64, 4> x{1, 0, 0, 0}; // projective [x0:x1:x2:x3], primitive
    int witness_coord = -1;         // affine coordinate i with the Hensel witness
    int witness_t = 0;              // t = v_p(dF/du_i), needs N >= 2t+1
};

struct AffinePoint {
    i64 p = 0;
    int N = 0;
    std::array<u64, 3> u{0, 0, 0};
    int witness_coord = 0;
    int witness_t = 0;
};

enum class Solubility { Soluble, Insoluble, SolubleByTheory };

struct PlaceVerdict {
    Solubility status = Solubility::Soluble;
    std::optional<AffinePoint> witness; // for Soluble / SolubleByTheory
    int exhausted_level = 0;            // for Insoluble: no residues mod p^level
    std::string note;
};

struct SolubilityVerdict {
    bool real_place = true; // U(R) != {} always (solve for u1 by real cube root)
    std::map<i64, PlaceVerdict> at_prime;
    i64 checked_up_to = 0;
    bool els() const {
        for (auto& [p, v] : at_prime)
            if (v.status == Solubility::Insoluble) return false;
        return real_place;
    }
    std::optional<i64> first_insoluble() const {
        for (auto& [p, v] : at_prime)
            if (v.status == Solubility::Insoluble) return p;
        return std::nullopt;
    }
};

// Constant true; kept as the spec'd operation.
bool has_R_points(const Surface& s);

// Exact decision at one prime (fast path for p not dividing 3 a1 a2 a3).
PlaceVerdict has_Zp_points(const Surface& s, i64 p);

// Checks the real place and every p <= max(bound, bad primes); good primes
// beyond the explicit list are covered by the smooth-reduction argument.
SolubilityVerdict is_ELS(const Surface& s, i64 prime_bound = 0);

// All integral points with |u_i| <= box (last coordinate solved by exact
// cube extraction, not a triple loop). box guard: <= 10^6.
std::vector<std::array<i64, 3>> brute_force_points(const Surface& s, i64 box);

// Projective local solubility of X at p (primitive residues).
bool has_Qp_points_projective(const Surface& s, i64 p);

// Witnessed affine residues mod p^level, deterministic enumeration order,
// at most max_count of them. level is raised internally so that every
// returned point satisfies N >= 2t+1.
std::vector<AffinePoint> enumerate_affine_points(const Surface& s, i64 p, int level,
                                                 size_t max_count);

// Lift a witnessed affine point to precision p^target (one Newton step per
// level on the witnessed coordinate).
AffinePoint hensel_lift(const Surface& s, const AffinePoint& pt, int target);

// Wrap an exact integral point as a local point at p (any precision is valid).
AffinePoint exact_point(const Surface& s, i64 p, std::array<i64, 3> u, int N);

// Cube root of a unit u mod p^prec, when one exists (p = 3 needs u = +-1 mod 9).
std::optional<u64> cube_root_unit_mod(u64 u, i64 p, int prec);

// Cube root of a rational that is a cube in Q_p and a p-adic unit.
std::optional<u64> cube_root_padic(const Rational& x, i64 p, int prec);

} // namespace dcs
