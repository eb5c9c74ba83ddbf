#include "dcs/symbols.hpp"

#include <algorithm>
#include <set>

#include "dcs/primes.hpp"

namespace dcs {

namespace {

// F_{p^2} = F_p[w]/(w^2+w+1) arithmetic for the inert residue field.
struct F2 {
    u64 p;
    using E = std::pair<u64, u64>;
    E mul(E x, E y) const {
        u64 ac = mulmod(x.first, y.first, p), bd = mulmod(x.second, y.second, p);
        u64 ad = mulmod(x.first, y.second, p), bc = mulmod(x.second, y.first, p);
        return {(ac + p - bd) % p, (ad + bc + p - bd) % p};
    }
    E pow(E x, u64 e) const {
        E r{1, 0};
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
};

} // namespace

int cubic_character_residue(const PlaceK& w, u64 a, u64 b) {
    if (w.kind == PlaceKind::Split) {
        u64 p = u64(w.p);
        u64 t = powmod(a % p, (p - 1) / 3, p);
        if (t == 1) return 0;
        if (t == u64(w.root) % p) return 1;
        u64 r2 = u64(((-1 - w.root) % w.p + w.p) % w.p);
        if (t == r2) return 2;
        throw std::domain_error("cubic_character: not a unit");
    }
    if (w.kind == PlaceKind::Inert) {
        F2 f{u64(w.p)};
        u64 p = u64(w.p);
        auto t = f.pow({a % p, b % p}, (p * p - 1) / 3);
        if (t == F2::E{1, 0}) return 0;
        if (t == F2::E{0, 1}) return 1;
        if (t == F2::E{p - 1, p - 1}) return 2; // w^2 = -1 - w
        throw std::domain_error("cubic_character: not a unit");
    }
    throw std::domain_error("cubic_character: tame places only");
}

TameLocal embed_tame(const EisRat& x, const PlaceK& w) {
    if (x.is_zero()) throw std::domain_error("embed_tame: zero");
    i64 p = w.p;
    int m = valuation(x, w);
    if (w.kind == PlaceKind::Inert) {
        // strip p from numerator / denominator coordinatewise
        EisensteinInt z = x.num;
        int vn = 0;
        while (z.a % p == 0 && z.b % p == 0) { z.a /= p; z.b /= p; ++vn; }
        i64 d = x.den;
        int vd = valuation_int(d, p);
        d /= i64(ipow_u64(u64(p), vd));
        u64 di = invmod(u64((d % p + p) % p), u64(p));
        u64 a = mulmod(u64((z.a % p + p) % p), di, u64(p));
        u64 b = mulmod(u64((z.b % p + p) % p), di, u64(p));
        assert(m == vn - vd);
        return {m, a, b};
    }
    if (w.kind == PlaceKind::Split) {
        // image of num under w -> lifted root, with enough precision to
        // strip the full valuation
        i128 nn = x.num.norm2();
        int bound = 0;
        while (nn % p == 0) { nn /= p; ++bound; }
        int M = bound + 2;
        u64 P = ipow_u64(u64(p), M);
        u64 R = lift_omega_root(p, w.root, M);
        u64 img = (u64((x.num.a % i64(P) + i64(P)) % i64(P)) +
                   mulmod(u64((x.num.b % i64(P) + i64(P)) % i64(P)), R, P)) % P;
        int vn = 0;
        while (img % u64(p) == 0 && vn < M) { img /= u64(p); ++vn; }
        i64 d = x.den;
        int vd = valuation_int(d, p);
        d /= i64(ipow_u64(u64(p), vd));
        u64 u = mulmod(img % u64(p), invmod(u64((d % p + p) % p), u64(p)), u64(p));
        assert(m == vn - vd);
        return {m, u, 0};
    }
    throw std::domain_error("embed_tame: tame places only");
}

int tame_symbol(const TameLocal& x, const TameLocal& y, const PlaceK& w) {
    i64 r = i64(x.val) * cubic_character_residue(w, y.a, y.b) -
            i64(y.val) * cubic_character_residue(w, x.a, x.b);
    return int(((r % 3) + 3) % 3);
}

int cubic_character(const EisRat& u, const PlaceK& w) {
    TameLocal t = embed_tame(u, w);
    if (t.val != 0) throw std::domain_error("cubic_character: non-unit input");
    return cubic_character_residue(w, t.a, t.b);
}

InvariantValue hilbert_cubic(const EisRat& a, const EisRat& b, const PlaceK& w,
                             const Wild3& wild) {
    if (a.is_zero() || b.is_zero()) throw std::domain_error("hilbert_cubic: zero argument");
    switch (w.kind) {
        case PlaceKind::Complex:
            return InvariantValue(0);
        case PlaceKind::Ramified:
            return InvariantValue(wild.symbol(wild.embed(a), wild.embed(b)));
        case PlaceKind::Split:
        case PlaceKind::Inert:
            return InvariantValue(tame_symbol(embed_tame(a, w), embed_tame(b, w), w));
    }
    return InvariantValue(0);
}

std::vector<PlaceK> symbol_support(const EisRat& a, const EisRat& b) {
    std::set<i64> ps{3};
    for (const EisRat* x : {&a, &b}) {
        // prime support of norm(num) and of den
        i128 n = x->num.norm2();
        if (n > i128(INT64_MAX)) throw std::overflow_error("symbol_support");
        for (auto [p, e] : factorize(i64(n))) { (void)e; ps.insert(p); }
        if (x->den > 1)
            for (auto [p, e] : factorize(x->den)) { (void)e; ps.insert(p); }
    }
    std::vector<PlaceK> S;
    for (i64 p : ps)
        for (const PlaceK& w : classify_prime(p)) S.push_back(w);
    return S;
}

InvariantValue sum_over_places(const EisRat& a, const EisRat& b,
                               const std::vector<PlaceK>& S) {
    Wild3 wild;
    InvariantValue t;
    for (const PlaceK& w : S) t = t + hilbert_cubic(a, b, w, wild);
    return t;
}

InvariantValue sum_over_places(const EisRat& a, const EisRat& b) {
    return sum_over_places(a, b, symbol_support(a, b));
}

// ---------------------------------------------------------------------------

CubeClass cube_class_local(const Rational& x, i64 p) {
    if (x.is_zero()) throw std::domain_error("cube_class_local: zero");
    if (p == 0) return {0, 0, 0}; // every real number is a cube
    CubeClass c;
    c.place = p;
    int v = x.valuation(p);
    c.val_mod3 = ((v % 3) + 3) % 3;
    // unit part u = x / p^v
    i64 pn = i64(ipow_u64(u64(p), std::abs(v)));
    Rational u = v >= 0 ? x / Rational{pn} : x * Rational{pn};
    if (p == 3) {
        // a 3-adic unit is a cube iff it is +-1 mod 9
        i64 n = ((u.num % 9) + 9) % 9, d = ((u.den % 9) + 9) % 9;
        i64 r = i64(mulmod(u64(n), invmod(u64(d), 9), 9));
        c.unit_char = (r == 1 || r == 8) ? 0 : 1;
    } else if (p % 3 == 2) {
        c.unit_char = 0; // cubing is bijective on Z_p^*
    } else {
        u64 n = u64(((u.num % p) + p) % p), d = u64(((u.den % p) + p) % p);
        u64 r = mulmod(n, invmod(d, u64(p)), u64(p));
        u64 t = powmod(r, u64((p - 1) / 3), u64(p));
        c.unit_char = (t == 1) ? 0 : 1;
    }
    return c;
}

bool is_cube_local(const Rational& x, i64 p) { return cube_class_local(x, p).is_cube(); }

i64 cube_free_part(i64 x) {
    assert(x != 0);
    i64 sign = x < 0 ? -1 : 1;
    i64 r = 1;
    for (auto [p, e] : factorize(x))
        for (int i = 0; i < e % 3; ++i) r = checked_mul(r, p);
    return sign * r; // sign preserved; -1 is itself a cube
}

Rational cube_free_part(const Rational& x) {
    return Rational{cube_free_part(x.num), 1} / Rational{cube_free_part(x.den), 1};
}

bool is_cube_rational(const Rational& x) {
    if (x.is_zero()) throw std::domain_error("is_cube_rational: zero");
    return iabs(cube_free_part(x.num)) == 1 && iabs(cube_free_part(x.den)) == 1;
}

// ---------------------------------------------------------------------------

namespace {
int legendre(i64 a, i64 p) { // (a/p) for odd prime p, in {0, +-1}
    a %= p; if (a < 0) a += p;
    if (a == 0) return 0;
    u64 t = powmod(u64(a), u64((p - 1) / 2), u64(p));
    return t == 1 ? 1 : -1;
}
} // namespace

int hilbert_quadratic(const Rational& a, const Rational& b, i64 p) {
    if (a.is_zero() || b.is_zero()) throw std::domain_error("hilbert_quadratic: zero");
    if (p == 0) return (a.num < 0 && b.num < 0) ? 1 : 0;
    // write a = p^alpha u, b = p^beta v with u, v p-units given as rationals
    int alpha = a.valuation(p), beta = b.valuation(p);
    auto unit_mod = [&](const Rational& x, int v, u64 m) -> u64 {
        i64 pm = i64(ipow_u64(u64(p), std::abs(v)));
        Rational u = v >= 0 ? x / Rational{pm} : x * Rational{pm};
        u64 n = u64(((u.num % i64(m)) + i64(m)) % i64(m));
        u64 d = u64(((u.den % i64(m)) + i64(m)) % i64(m));
        return mulmod(n, invmod(d, m), m);
    };
    if (p != 2) {
        u64 up = unit_mod(a, alpha, u64(p)), vp = unit_mod(b, beta, u64(p));
        int eps = (p % 4 == 3) ? 1 : 0; // (-1/p) = -1 iff p = 3 mod 4
        int s = (alpha * beta * eps) % 2;
        if (beta % 2 != 0 && legendre(i64(up), p) == -1) s ^= 1;
        if (alpha % 2 != 0 && legendre(i64(vp), p) == -1) s ^= 1;
        return s & 1;
    }
    // p = 2: (a,b)_2 = eps(u)eps(v) + alpha*omega(v) + beta*omega(u) mod 2
    u64 u8 = unit_mod(a, alpha, 8), v8 = unit_mod(b, beta, 8);
    auto eps2 = [](u64 u) { return int((u - 1) / 2 % 2); };
    auto om2 = [](u64 u) { return int((u * u - 1) / 8 % 2); };
    int s = eps2(u8) * eps2(v8) + alpha * om2(v8) + beta * om2(u8);
    return s & 1;
}

} // namespace dcs
