#pragma once

// Local invariant maps of the order-3 Brauer generator: evaluation on local
// points (the two-coefficient corestriction formula when a1 = a2, and the
// decomposition-group table otherwise), the norm equation Norm = -mu for the
// table's epsilon normalization, per-place achievable value sets, and the
// obstruction verdicts assembled from them.

#include <map>
#include <optional>
#include <vector>

#include "dcs/localsolve.hpp"
#include "dcs/surface.hpp"
#include "dcs/wild.hpp"

namespace dcs {

// ---------------------------------------------------------------------------
// epsilon: an element of Q(beta), beta^3 = m, with Norm_{Q(beta)/Q} = -mu.
// Coefficients are over the order basis used by the search:
//   m = 4/5  ->  1, 5 beta, (5 beta^2 + 10 beta + 2)/6
//   else     ->  1, s beta, (s beta)^2   for m = r/s in lowest terms
struct EpsilonData {
    Rational m;                  // beta^3
    Rational mu;                 // Norm(epsilon) = -mu exactly
    std::array<i64, 3> e{0, 0, 0}; // basis coefficients
    bool paper_basis = false;    // the m = 4/5 integral basis
    bool integral = true;        // epsilon in O_{Q(beta)}

    // coordinates (x, y, z) with epsilon = x + y beta + z beta^2
    std::array<Rational, 3> coords() const;
    // Norm(x + y b + z b^2) = x^3 + m y^3 + m^2 z^3 - 3 m x y z
    Rational norm() const;
};

// Bounded shell search; accepts Norm = +-mu (sign fixed by flipping epsilon).
std::optional<EpsilonData> solve_norm_equation(const Rational& mu, const Rational& m,
                                               i64 bound = 200);

// ---------------------------------------------------------------------------
// Evaluation of the two-coefficient generator (a1 = a2):
//   A' = Cor_{k/Q} (a0/a3, (x1 + w x2)/(x1 + x2))_w ,
// evaluated as (a0/a3, (u1+w u2)/(u1+w^2 u2)) at the canonical split place,
// (a0/a3, (u1+w u2)/(u1+u2)) at inert places and at the wild place.
// `scale` multiplies the class (A' -> scale * A').
InvariantValue eval_two_coeff(const Surface& s, i64 p, const AffinePoint& pt,
                              int scale = 1, const PlaceK* place_override = nullptr);

// ---------------------------------------------------------------------------
// Table-driven evaluation at a place v on a projective point of
//   y0^3 + lambda y1^3 + mu y2^3 + lambda mu nu y3^3 = 0
// (the table's coordinates; transport from the x-model is y = (-x0,x1,x2,-x3)).
struct TablePoint {
    i64 p = 0;
    int N = 0;
    std::array<i64, 4> y{}; // integer representatives of classes mod p^N
};

struct Unsupported {
    std::string reason;
};

// Either a value or an Unsupported marker (G row, or missing epsilon).
struct TableEval {
    std::optional<InvariantValue> value;
    DecompGroup row = DecompGroup::G;
    std::string note;
    bool supported() const { return value.has_value(); }
};

TableEval eval_table1(const TableParams& tp, i64 v, const TablePoint& pt,
                      const std::optional<EpsilonData>& eps, int scale = 1);

// Transport an affine point of the raw model into table coordinates.
TablePoint table_point_from_affine(const Normalized& n, i64 p, const AffinePoint& pt);

// ---------------------------------------------------------------------------
// The U_{l,p,q} family (X: y0^3 + l y1^3 + pq y2^3 + q l^2 y3^3 = 0) and its
// U' integral model p^3 u1^3 + pq u2^3 + q l^2 u3^3 = l.
struct LpqFamily {
    i64 l = 0, p = 0, q = 0;
    bool uprime_model = false;     // U' model (a0 = l) vs the x1 = 1 chart (a0 = -l)
    std::array<int, 3> slot{0, 1, 2}; // raw u_i -> table slot (y1-block ordering)
};
std::optional<LpqFamily> detect_lpq(const Surface& raw);

// Prop 7.2: on points with y0 = 0 mod p, y1 != 0 mod p the invariant at p is
// -(p^2-1)/9, i.e. 2/3 for p = 2 mod 9 and 1/3 for p = 5 mod 9.
InvariantValue special_point_value(const LpqFamily& fam);

// ---------------------------------------------------------------------------

struct ValueSet {
    unsigned mask = 0;   // bit i <-> value i/3 achievable
    bool exact = false;  // exact set (lemma-backed) vs sampled lower bound
    bool known = true;   // false: constant place whose value we cannot evaluate
    std::string source;  // provenance tag

    void add(InvariantValue v) { mask |= 1u << v.v; }
    bool contains(int v) const { return (mask >> v) & 1u; }
    int size() const { return __builtin_popcount(mask); }
    std::vector<std::string> names() const;
};

enum class Verdict { IHP_obstructed, ISA_off_infinity_fails, No_algebraic_obstruction, Inconclusive };
std::string verdict_name(Verdict v);

struct PlaceValue {
    i64 p = 0; // 0 = real place
    ValueSet set;
};

struct ObstructionReport {
    Surface raw;
    Normalized norm;
    BrauerShape shape;
    bool els = false;
    std::optional<i64> els_failure;
    std::vector<PlaceValue> places; // bad places + the real place
    unsigned sumset = 1;            // Minkowski sum over finite places (bit mask)
    bool sumset_exact = true;
    bool ihp_obstructed = false;
    bool isa_fails = false;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<EpsilonData> eps;
    std::optional<std::array<i64, 3>> integral_point;
    std::vector<std::string> certificates;
    std::string to_json() const; // stable key order, render 0|1/3|2/3
};

struct AnalyzeOptions {
    i64 prime_bound = 0;  // extra ELS primes to check explicitly
    int sample_points = 24;
    i64 eps_bound = 200;
    i64 point_box = 30;   // analyze_surface searches this box for integral points
    u64 seed = 1;
    int scale = 1; // evaluate scale * A'
};

// Per-place achievable set for the generator, by the priority chain
// (real place, local rationality, Prop 4.1, Prop 4.2, Lemma 5.6, Lemma 5.7,
// family rules, sampling).
ValueSet value_set(const Surface& raw, i64 v, const AnalyzeOptions& opt = {});

// Full pipeline on an ELS surface.
ObstructionReport bm_obstruction(const Surface& raw, const SolubilityVerdict& els,
                                 const AnalyzeOptions& opt = {});

// Convenience: is_ELS + bm_obstruction.
ObstructionReport analyze_surface(const Surface& raw, const AnalyzeOptions& opt = {});

// ---------------------------------------------------------------------------
// Transcendental 2-torsion class (a1 = a2, a3/a1 = 2 mod cubes):
//   (a0 (x1+x2+2x3), -3 (x1+x2+2x3)(x1+x2))
// evaluated through the quadratic Hilbert symbol at p. Evaluation only; no
// verdict logic ties into it.
int eval_transcendental_2torsion(const Surface& s, const AffinePoint& pt, i64 p);

} // namespace dcs
