#include "dcs/eisenstein.hpp"

#include <algorithm>

#include "dcs/primes.hpp"

namespace dcs {

std::vector<i64> omega_roots_mod_p(i64 p) {
    assert(p % 3 == 1);
    std::vector<i64> rs;
    // x^2+x+1 has exactly two roots mod p; find the first by a character-free
    // search (p is small at desk scale), the second is -1-r.
    for (i64 r = 1; r < p; ++r) {
        if ((i128(r) * r + r + 1) % p == 0) {
            rs.push_back(r);
            i64 r2 = ((-1 - r) % p + p) % p;
            rs.push_back(r2);
            break;
        }
    }
    std::sort(rs.begin(), rs.end());
    return rs;
}

std::vector<PlaceK> classify_prime(i64 p) {
    if (!is_prime_i64(p)) throw std::domain_error("classify_prime: not a prime");
    if (p == 3) return {PlaceK::ramified()};
    if (p % 3 == 2) return {PlaceK::inert(p)};
    auto rs = omega_roots_mod_p(p);
    return {PlaceK::split(p, rs[0]), PlaceK::split(p, rs[1])};
}

u64 lift_omega_root(i64 p, i64 r, int M) {
    u64 P = ipow_u64(u64(p), M);
    u64 x = u64(r);
    u64 mod = u64(p);
    while (mod < P) {
        u128 next = u128(mod) * mod;
        mod = next > P ? P : u64(next);
        u64 f = (mulmod(x, x, mod) + x + 1) % mod;
        u64 fp = (2 * x + 1) % mod;
        x = (x + mod - mulmod(f, invmod(fp, mod), mod)) % mod;
    }
    return x % P;
}

int valuation(const EisRat& x, const PlaceK& w) {
    if (x.is_zero()) throw std::domain_error("valuation of zero");
    switch (w.kind) {
        case PlaceKind::Complex:
            throw std::domain_error("no valuation at the complex place");
        case PlaceKind::Ramified: {
            // v_lambda = v_3 of the norm.
            i128 n = x.num.norm2();
            int v = 0;
            while (n % 3 == 0) { n /= 3; ++v; }
            return v - 2 * valuation_int(x.den, 3);
        }
        case PlaceKind::Inert: {
            EisensteinInt z = x.num;
            int v = 0;
            while (z.a % w.p == 0 && z.b % w.p == 0) { z.a /= w.p; z.b /= w.p; ++v; }
            return v - valuation_int(x.den, w.p);
        }
        case PlaceKind::Split: {
            // Embed via w -> lifted root with generous precision; the
            // valuation is v_p of the image.
            i128 nn = x.num.norm2();
            int bound = 0;
            while (nn % w.p == 0) { nn /= w.p; ++bound; }
            int M = bound + 3;
            u64 P = ipow_u64(u64(w.p), M);
            u64 R = lift_omega_root(w.p, w.root, M);
            u64 img = (u64(((x.num.a % i64(P)) + i64(P)) % i64(P)) +
                       mulmod(u64(((x.num.b % i64(P)) + i64(P)) % i64(P)), R, P)) % P;
            int v = 0;
            while (img != 0 && img % u64(w.p) == 0 && v < M) { img /= u64(w.p); ++v; }
            if (img == 0) v = bound; // the conjugate carries none: v_p(num) total
            return v - valuation_int(x.den, w.p);
        }
    }
    return 0;
}

i64 residue_split(const EisRat& x, const PlaceK& w) {
    assert(w.kind == PlaceKind::Split);
    if (valuation(x, w) < 0) throw std::domain_error("residue of non-integral element");
    i64 p = w.p;
    i64 num = ((x.num.a % p + p) % p + (x.num.b % p + p) % p * w.root) % p;
    i64 den = ((x.den % p) + p) % p;
    if (den == 0) throw std::domain_error("residue: denominator not a unit");
    return i64(mulmod(u64(num), invmod(u64(den), u64(p)), u64(p)));
}

} // namespace dcs
