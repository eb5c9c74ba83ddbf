#include "dcs/localsolve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dcs/primes.hpp"

namespace dcs {

namespace {

u64 mod_reduce(i64 a, u64 m) { return u64(((a % i64(m)) + i64(m)) % i64(m)); }

// F(u) = a1 u1^3 + a2 u2^3 + a3 u3^3 - a0 mod m
u64 eval_F(const Surface& s, const std::array<u64, 3>& u, u64 m) {
    u64 r = m - mod_reduce(s.a0, m);
    const i64 as[3] = {s.a1, s.a2, s.a3};
    for (int i = 0; i < 3; ++i) {
        u64 c = mulmod(mulmod(u[size_t(i)], u[size_t(i)], m), u[size_t(i)], m);
        r = (r + mulmod(mod_reduce(as[i], m), c, m)) % m;
    }
    return r % m;
}

// t_i = v_p(dF/du_i) at a residue known mod p^level (capped there).
int witness_t(const Surface& s, i64 p, const std::array<u64, 3>& u, int i, int level) {
    const i64 as[3] = {s.a1, s.a2, s.a3};
    int vu = 0;
    u64 x = u[size_t(i)];
    while (vu < level && x % u64(p) == 0) { x /= u64(p); ++vu; }
    return (p == 3 ? 1 : 0) + valuation_int(as[i], p) + 2 * std::min(vu, level);
}

// Best Hensel witness coordinate at this level, or -1.
int find_witness(const Surface& s, i64 p, const std::array<u64, 3>& u, int level, int* t_out) {
    int best = -1, bt = 0;
    for (int i = 0; i < 3; ++i) {
        int t = witness_t(s, p, u, i, level);
        if (level >= 2 * t + 1 && (best < 0 || t < bt)) { best = i; bt = t; }
    }
    if (t_out) *t_out = bt;
    return best;
}

// Breadth-first refinement. Stops early on the first witness unless
// `collect` is set, in which case every solution node keeps refining while
// the width stays affordable; the deepest level's witnessed residues are
// reported (representatives of distinct p-adic disks) for the caller to
// Hensel-lift to its working precision.
PlaceVerdict refine(const Surface& s, i64 p, std::vector<AffinePoint>* collect,
                    int collect_level, size_t collect_max) {
    int E = p == 3 ? 1 : 0;
    for (i64 a : {s.a1, s.a2, s.a3}) E = std::max(E, (p == 3 ? 1 : 0) + valuation_int(a, p));
    int v0 = valuation_int(s.a0, p);
    int cap = 2 * E + 1 + 3 * (v0 / 3 + 1) + 3; // descent u -> p u' eats 3 levels per cube in a0
    if (collect) cap = std::max(cap, collect_level);
    const size_t wcap = 400'000;

    PlaceVerdict out;
    std::vector<std::array<u64, 3>> cur{{0, 0, 0}};
    std::vector<AffinePoint> wit_prev;
    u64 pj = 1;
    for (int level = 1; level <= cap; ++level) {
        if (u128(pj) * u64(p) > u128(1) << 62) throw std::overflow_error("refine: modulus");
        u64 pj1 = pj * u64(p);
        std::vector<std::array<u64, 3>> next;
        std::vector<AffinePoint> wit;
        for (const auto& nd : cur) {
            for (u64 c1 = 0; c1 < u64(p); ++c1)
                for (u64 c2 = 0; c2 < u64(p); ++c2)
                    for (u64 c3 = 0; c3 < u64(p); ++c3) {
                        std::array<u64, 3> u{nd[0] + c1 * pj, nd[1] + c2 * pj, nd[2] + c3 * pj};
                        if (eval_F(s, u, pj1) != 0) continue;
                        int t = 0, wi = find_witness(s, p, u, level, &t);
                        if (!collect) {
                            if (wi >= 0) {
                                out.status = Solubility::Soluble;
                                out.witness = AffinePoint{p, level, u, wi, t};
                                out.note = "hensel witness";
                                return out;
                            }
                            next.push_back(u);
                        } else {
                            if (wi >= 0) wit.push_back(AffinePoint{p, level, u, wi, t});
                            next.push_back(u);
                        }
                    }
        }
        if (!collect && next.empty()) {
            out.status = Solubility::Insoluble;
            out.exhausted_level = level;
            out.note = "exhausted residues mod p^" + std::to_string(level);
            return out;
        }
        if (collect) {
            bool last = level == collect_level || next.empty() ||
                        u128(next.size()) * u64(p) * u64(p) * u64(p) > wcap;
            if (last) {
                auto& src = !wit.empty() ? wit : wit_prev;
                std::sort(src.begin(), src.end(),
                          [](const AffinePoint& a, const AffinePoint& b) { return a.u < b.u; });
                size_t stride = std::max<size_t>(1, src.size() / std::max<size_t>(collect_max, 1));
                for (size_t i = 0; i < src.size() && collect->size() < collect_max; i += stride)
                    collect->push_back(src[i]);
                return out;
            }
            wit_prev = std::move(wit);
        }
        if (next.size() > 4'000'000) throw std::overflow_error("refine: width");
        cur = std::move(next);
        pj = pj1;
    }
    if (collect) return out;
    // every surviving chain would be a singular Z_p point, which a smooth
    // affine cubic does not have; the cap above is a hard bound
    throw std::logic_error("refine: did not terminate");
}

} // namespace

bool has_R_points(const Surface& s) {
    (void)s; // solve a1 u1^3 = a0 - a2 u2^3 - a3 u3^3 by a real cube root
    return true;
}

PlaceVerdict has_Zp_points(const Surface& s, i64 p) {
    i64 form = s.form_product();
    if (mod_reduce(checked_mul(3, form), u64(p)) != 0) {
        // Good form reduction: the curve a1 x^3 + a2 y^3 + a3 z^3 = 0 over F_p
        // has p+1-2*sqrt(p) > 0 points (Hasse-Weil), so a smooth affine
        // residue exists for every a0; find one explicitly and certify it.
        u64 P = u64(p);
        for (u64 u3 = 0; u3 < P; ++u3) {
            for (u64 u2 = 0; u2 < P; ++u2) {
                u64 rhs = mod_reduce(s.a0, P);
                rhs = (rhs + P - mulmod(mod_reduce(s.a2, P), powmod(u2, 3, P), P)) % P;
                rhs = (rhs + P - mulmod(mod_reduce(s.a3, P), powmod(u3, 3, P), P)) % P;
                rhs = mulmod(rhs, invmod(mod_reduce(s.a1, P), P), P);
                for (u64 u1 = 0; u1 < P; ++u1) {
                    if (powmod(u1, 3, P) != rhs) continue;
                    std::array<u64, 3> u{u1, u2, u3};
                    int t = 0, wi = find_witness(s, p, u, 1, &t);
                    if (wi >= 0) {
                        PlaceVerdict out;
                        out.status = Solubility::Soluble;
                        out.witness = AffinePoint{p, 1, u, wi, t};
                        out.note = "good reduction, smooth residue";
                        return out;
                    }
                    break; // the cube root mod p is unique up to cube roots of 1
                }
            }
        }
        throw std::logic_error("has_Zp_points: no smooth residue at a good prime");
    }
    return refine(s, p, nullptr, 0, 0);
}

SolubilityVerdict is_ELS(const Surface& s, i64 prime_bound) {
    SolubilityVerdict out;
    out.real_place = has_R_points(s);
    std::set<i64> ps;
    for (auto [p, e] : factorize(checked_mul(3, s.form_product()))) { (void)e; ps.insert(p); }
    for (i64 p = 2; p <= prime_bound; ++p)
        if (is_prime_i64(p)) ps.insert(p);
    out.checked_up_to = std::max<i64>(prime_bound, ps.empty() ? 0 : *ps.rbegin());
    for (i64 p : ps) {
        out.at_prime[p] = has_Zp_points(s, p);
        if (out.at_prime[p].status == Solubility::Insoluble) break;
    }
    return out;
}

std::vector<std::array<i64, 3>> brute_force_points(const Surface& s, i64 box) {
    if (box > 1'000'000) throw std::domain_error("brute_force_points: box too large");
    std::vector<std::array<i64, 3>> pts;
    for (i64 u1 = -box; u1 <= box; ++u1) {
        i128 r1 = i128(s.a0) - i128(s.a1) * u1 * u1 * u1;
        for (i64 u2 = -box; u2 <= box; ++u2) {
            i128 r = r1 - i128(s.a2) * u2 * u2 * u2;
            if (r % s.a3 != 0) continue;
            i128 c = r / s.a3;
            i64 t = i64(std::llround(std::cbrt(double(c)))); // seed for the exact check
            for (i64 u3 = t - 2; u3 <= t + 2; ++u3)
                if (i128(u3) * u3 * u3 == c && iabs(u3) <= box) pts.push_back({u1, u2, u3});
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

bool has_Qp_points_projective(const Surface& s, i64 p) {
    // primitive residues of a1 x1^3 + a2 x2^3 + a3 x3^3 - a0 x0^3 = 0 mod p^j;
    // primitivity keeps some coordinate a unit, so the depth is bounded by
    // 2 max_i v_p(3 c_i) + 1 outright (no descent branch).
    const i64 cs[4] = {-s.a0, s.a1, s.a2, s.a3};
    int E = 0;
    for (i64 c : cs) E = std::max(E, (p == 3 ? 1 : 0) + valuation_int(c, p));
    int K = 2 * E + 1;
    auto evalX = [&](const std::array<u64, 4>& x, u64 m) {
        u64 r = 0;
        for (int i = 0; i < 4; ++i)
            r = (r + mulmod(mod_reduce(cs[i], m), mulmod(mulmod(x[size_t(i)], x[size_t(i)], m), x[size_t(i)], m), m)) % m;
        return r;
    };
    std::vector<std::array<u64, 4>> cur{{0, 0, 0, 0}};
    u64 pj = 1;
    for (int level = 1; level <= K; ++level) {
        u64 pj1 = pj * u64(p);
        std::vector<std::array<u64, 4>> next;
        for (const auto& nd : cur) {
            std::array<u64, 4> c{};
            for (c[0] = 0; c[0] < u64(p); ++c[0])
                for (c[1] = 0; c[1] < u64(p); ++c[1])
                    for (c[2] = 0; c[2] < u64(p); ++c[2])
                        for (c[3] = 0; c[3] < u64(p); ++c[3]) {
                            std::array<u64, 4> x{nd[0] + c[0] * pj, nd[1] + c[1] * pj,
                                                 nd[2] + c[2] * pj, nd[3] + c[3] * pj};
                            if (level == 1 && x[0] % u64(p) == 0 && x[1] % u64(p) == 0 &&
                                x[2] % u64(p) == 0 && x[3] % u64(p) == 0)
                                continue;
                            if (evalX(x, pj1) != 0) continue;
                            for (int i = 0; i < 4; ++i) {
                                int vu = 0;
                                u64 y = x[size_t(i)];
                                while (vu < level && y % u64(p) == 0) { y /= u64(p); ++vu; }
                                int t = (p == 3 ? 1 : 0) + valuation_int(cs[i], p) + 2 * std::min(vu, level);
                                if (level >= 2 * t + 1) return true;
                            }
                            next.push_back(x);
                        }
        }
        if (next.empty()) return false;
        if (next.size() > 4'000'000) throw std::overflow_error("has_Qp_points_projective: width");
        cur = std::move(next);
        pj = pj1;
    }
    return false; // unreachable: primitive nodes witness by level 2E+1
}

std::vector<AffinePoint> enumerate_affine_points(const Surface& s, i64 p, int level,
                                                 size_t max_count) {
    std::vector<AffinePoint> pts;
    refine(s, p, &pts, level, max_count);
    for (AffinePoint& pt : pts)
        if (pt.N < level) pt = hensel_lift(s, pt, level);
    return pts;
}

AffinePoint hensel_lift(const Surface& s, const AffinePoint& pt, int target) {
    if (pt.N >= target) return pt;
    const int i = pt.witness_coord;
    const int t = pt.witness_t;
    const i64 as[3] = {s.a1, s.a2, s.a3};
    const u64 p = u64(pt.p);
    int M = target + 2 * t + 2;
    if (double(M) * std::log2(double(p)) > 62)
        throw precision_error("hensel_lift: precision beyond the 64-bit range");
    u64 Pm = ipow_u64(p, M);
    u64 Pt = ipow_u64(p, target);
    std::array<u64, 3> u = pt.u;
    for (int it = 0; it < 4 * M + 8; ++it) {
        u64 F = eval_F(s, u, Pm);
        if (F % Pt == 0) {
            AffinePoint out = pt;
            out.N = target;
            for (int j = 0; j < 3; ++j) out.u[size_t(j)] = u[size_t(j)] % Pt;
            if (eval_F(s, out.u, Pt) != 0) throw std::logic_error("hensel_lift: bad lift");
            return out;
        }
        // dF/du_i = 3 a_i u_i^2 = p^t * g with g a unit
        u64 Fp = mulmod(mod_reduce(checked_mul(3, as[i]), Pm),
                        mulmod(u[size_t(i)], u[size_t(i)], Pm), Pm);
        u64 pt_pow = ipow_u64(p, t);
        if (Fp % pt_pow != 0 || (Fp / pt_pow) % p == 0)
            throw precision_error("hensel_lift: witness derivative degenerated");
        if (F % pt_pow != 0) throw std::logic_error("hensel_lift: F valuation below t");
        u64 Mq = Pm / pt_pow;
        u64 delta = mulmod((F / pt_pow) % Mq, invmod((Fp / pt_pow) % Mq, Mq), Mq);
        u[size_t(i)] = (u[size_t(i)] + Pm - delta % Pm) % Pm;
    }
    throw precision_error("hensel_lift: did not converge");
}

AffinePoint exact_point(const Surface& s, i64 p, std::array<i64, 3> u, int N) {
    i128 lhs = i128(s.a1) * u[0] * u[0] * u[0] + i128(s.a2) * u[1] * u[1] * u[1] +
               i128(s.a3) * u[2] * u[2] * u[2];
    if (lhs != i128(s.a0)) throw std::domain_error("exact_point: not on the surface");
    u64 P = ipow_u64(u64(p), N);
    AffinePoint pt;
    pt.p = p;
    pt.N = N;
    for (int i = 0; i < 3; ++i) pt.u[size_t(i)] = mod_reduce(u[size_t(i)], P);
    int t = 0, wi = find_witness(s, p, pt.u, N, &t);
    if (wi < 0) throw std::domain_error("exact_point: no witness at this precision");
    pt.witness_coord = wi;
    pt.witness_t = t;
    return pt;
}

std::optional<u64> cube_root_unit_mod(u64 a, i64 p, int prec) {
    u64 P = ipow_u64(u64(p), prec);
    a %= P;
    if (a % u64(p) == 0) return std::nullopt;
    if (p == 3) {
        if (prec < 3) P = 27, prec = 3;
        if (a % 9 != 1 && a % 9 != 8) return std::nullopt;
        u64 y = 0;
        for (u64 cand = 1; cand < 27; ++cand)
            if (cand % 3 != 0 && mulmod(mulmod(cand, cand, 27), cand, 27) == a % 27) { y = cand; break; }
        if (y == 0) return std::nullopt;
        // digit lifting: (y + c 3^(k-1))^3 = y^3 + c y^2 3^k mod 3^(k+1) for k >= 2,
        // and y^2 = 1 mod 3, so each step reads one digit off a - y^3
        for (int k = 3; k < prec; ++k) {
            u64 mod = ipow_u64(3, k + 1);
            u64 cur = mulmod(mulmod(y, y, mod), y, mod);
            u64 diff = (a % mod + mod - cur) % mod;
            u64 pk = ipow_u64(3, k);
            if (diff % pk != 0) throw std::logic_error("cube_root: lift step");
            u64 c = (diff / pk) % 3;
            y = (y + c * ipow_u64(3, k - 1)) % mod;
        }
        if (mulmod(mulmod(y % P, y % P, P), y % P, P) != a % P) return std::nullopt;
        return y % P;
    }
    u64 y0 = 0;
    bool found = false;
    for (u64 y = 1; y < u64(p); ++y)
        if (powmod(y, 3, u64(p)) == a % u64(p)) { y0 = y; found = true; break; }
    if (!found) return std::nullopt;
    u64 mod = u64(p), y = y0;
    while (mod < P) {
        u128 nx = u128(mod) * mod;
        mod = nx > P ? P : u64(nx);
        u64 f = (mulmod(mulmod(y, y, mod), y, mod) + mod - a % mod) % mod;
        u64 fp = mulmod(3 % mod, mulmod(y, y, mod), mod);
        y = (y + mod - mulmod(f, invmod(fp, mod), mod)) % mod;
    }
    return y % P;
}

std::optional<u64> cube_root_padic(const Rational& x, i64 p, int prec) {
    if (x.is_zero() || x.valuation(p) != 0) return std::nullopt;
    u64 P = ipow_u64(u64(p), prec);
    u64 n = mod_reduce(x.num, P), d = mod_reduce(x.den, P);
    return cube_root_unit_mod(mulmod(n, invmod(d, P), P), p, prec);
}

} // namespace dcs
