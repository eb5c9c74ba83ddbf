#include "dcs/wild.hpp"

namespace dcs {

Wild3::Wild3(int N) : N_(N) {
    if (N < 6 || N > 38) throw std::domain_error("Wild3: precision out of range");
    M_ = ipow_u64(3, N);
    M3_ = M_ * 3;
}

Zw Wild3::from_int(i64 a, i64 b) const {
    i64 m = i64(M_);
    return {u64((a % m + m) % m), u64((b % m + m) % m)};
}

Zw Wild3::add(Zw x, Zw y) const { return {(x.a + y.a) % M_, (x.b + y.b) % M_}; }
Zw Wild3::sub(Zw x, Zw y) const { return {(x.a + M_ - y.a) % M_, (x.b + M_ - y.b) % M_}; }
Zw Wild3::neg(Zw x) const { return {(M_ - x.a) % M_, (M_ - x.b) % M_}; }

Zw Wild3::mul(Zw x, Zw y) const {
    // (a+bw)(c+dw) = ac - bd + (ad + bc - bd) w
    u64 ac = mulmod(x.a, y.a, M_), bd = mulmod(x.b, y.b, M_);
    u64 ad = mulmod(x.a, y.b, M_), bc = mulmod(x.b, y.a, M_);
    return {(ac + M_ - bd) % M_, (ad + bc + M_ - bd) % M_};
}

Zw Wild3::pow(Zw x, int e) const {
    Zw r = one();
    while (e-- > 0) r = mul(r, x);
    return r;
}

Zw Wild3::inv(Zw x) const {
    // 1/x = conj(x)/norm(x); norm must be a unit mod 3^N.
    u64 n = (mulmod(x.a, x.a, M_) + M_ - mulmod(x.a, x.b, M_) + mulmod(x.b, x.b, M_)) % M_;
    if (n % 3 == 0) throw std::domain_error("Wild3::inv of a non-unit");
    u64 ni = invmod(n, M_);
    Zw c{(x.a + M_ - x.b) % M_, (M_ - x.b) % M_};
    return {mulmod(c.a, ni, M_), mulmod(c.b, ni, M_)};
}

int Wild3::vlambda(Zw x) const {
    if (is_zero(x)) return 1 << 20;
    // lift coordinates to the symmetric range and take v_3 of the exact norm
    i64 A = i64(x.a) > i64(M_ / 2) ? i64(x.a) - i64(M_) : i64(x.a);
    i64 B = i64(x.b) > i64(M_ / 2) ? i64(x.b) - i64(M_) : i64(x.b);
    i128 n = i128(A) * A - i128(A) * B + i128(B) * B;
    if (n == 0) return 1 << 20;
    int v = 0;
    while (n % 3 == 0) { n /= 3; ++v; }
    return v;
}

Zw Wild3::div_lambda(Zw x) const {
    // x/lambda = x*(2+w)/3, exact when lambda | x; in mod 3^(N+1):
    // (a+bw)(2+w) = (2a - b) + (a + b) w
    u64 ra = u64((2 * u128(x.a) + M3_ - x.b) % M3_);
    u64 rb = u64((u128(x.a) + x.b) % M3_);
    if (ra % 3 || rb % 3) throw precision_error("div_lambda: not divisible");
    return {(ra / 3) % M_, (rb / 3) % M_};
}

Wild3::Decomp Wild3::decompose(Zw x) const {
    int e = vlambda(x);
    if (e >= 2 * N_ - 4) throw precision_error("decompose: valuation exceeds precision");
    Zw u = x;
    for (int i = 0; i < e; ++i) u = div_lambda(u);
    int r = residue(u);
    if (r == 1) return {1, e, u};
    return {-1, e, neg(u)};
}

std::vector<int> Wild3::digits(Zw u, int k) const {
    if (residue(u) != 1) throw std::domain_error("digits: not a 1-unit");
    if (2 * N_ < 2 * (k + 1) + 2) throw precision_error("digits: precision too low");
    Zw z = sub(u, one());
    std::vector<int> out;
    for (int i = 0; i < k; ++i) {
        z = div_lambda(z);
        int b = residue(z);
        out.push_back(b);
        z = sub(z, from_int(b));
    }
    return out;
}

Wild3::Local Wild3::embed(const EisRat& x) const {
    if (x.is_zero()) throw std::domain_error("embed zero at w3");
    // strip lambda from the numerator exactly over Z[w]
    EisensteinInt z = x.num;
    i128 n = z.norm2();
    int e = 0;
    while (n % 3 == 0) { n /= 3; ++e; }
    for (int i = 0; i < e; ++i) {
        // z * (2+w) / 3 exactly
        EisensteinInt t = z * EisensteinInt{2, 1};
        assert(t.a % 3 == 0 && t.b % 3 == 0);
        z = {t.a / 3, t.b / 3};
    }
    int vd = valuation_int(x.den, 3);
    i64 d0 = x.den / i64(ipow_u64(3, vd));
    // 1/3 = lambda^{-2} * (-w)
    Zw u = mul(from_eis(z), pow(from_int(0, -1), vd));
    u64 inv_d0 = invmod(u64((d0 % i64(M_) + i64(M_)) % i64(M_)), M_);
    u = Zw{mulmod(u.a, inv_d0, M_), mulmod(u.b, inv_d0, M_)};
    return {e - 2 * vd, u};
}

LambdaExpansion Wild3::lambda_expand_local(Local x, int depth) const {
    if (depth < 4) throw std::domain_error("lambda_expand: depth must be >= 4");
    auto d = decompose(x.unit);
    // stripping e lambdas from modular data costs ceil(e/2) 3-digits
    int eff = N_ - (d.e + 1) / 2;
    if (2 * eff - 2 < depth + 2)
        throw precision_error("lambda_expand: insufficient precision to pin b1 mod 9");
    LambdaExpansion out;
    out.sign = d.sign;
    out.valuation = x.e + d.e;
    auto bs = digits(d.unit, 3);
    out.b1 = bs[0]; out.b2 = bs[1]; out.b3 = bs[2];
    return out;
}

LambdaExpansion Wild3::lambda_expand(const EisRat& x, int depth) const {
    return lambda_expand_local(embed(x), depth);
}

int Wild3::eq6(Zw u, Zw v) const {
    auto b = digits(u, 2), c = digits(v, 2);
    i64 r = i64(b[0]) * c[0] * (b[0] - c[0]) - i64(b[0]) * c[1] + i64(b[1]) * c[0];
    return int(((r % 3) + 3) % 3);
}

int Wild3::eq7(Zw u) const {
    // Normalize to b1 = 0 mod 3 via multiplication by w = 1 - lambda,
    // which shifts b1 by -1; uses (lambda, w) = 0.
    int b1 = digits(u, 1)[0];
    for (int i = 0; i < b1 % 3; ++i) u = mul(u, omega());
    auto bs = digits(u, 3);
    assert(bs[0] % 3 == 0);
    // Greedy digits pin one matching triple; scan the whole fiber of
    // (b1 mod 9, b2, b3) matching u mod lambda^4 and insist on agreement.
    int value = -1;
    Zw L = from_eis(kLambda);
    Zw L2 = mul(L, L), L3 = mul(L2, L);
    for (int t1 = 0; t1 < 9; ++t1) {
        for (int t2 = 0; t2 < 3; ++t2) {
            for (int t3 = 0; t3 < 3; ++t3) {
                Zw cand = add(add(one(), mul(from_int(t1), L)),
                              add(mul(from_int(t2), L2), mul(from_int(t3), L3)));
                if (vlambda(sub(u, cand)) < 4) continue;
                assert(t1 % 3 == 0); // b1 mod 3 is pinned by the element
                i64 r = (i64(t1) - i64(t1) * t1) / 3 + i64(t1) * t2 - t3;
                int val = int(((r % 3) + 3) % 3);
                if (value < 0) value = val;
                else if (value != val)
                    throw std::logic_error("eq7: matching triples disagree");
            }
        }
    }
    assert(value >= 0);
    return value;
}

int Wild3::symbol(Local x, Local y) const {
    auto dx = decompose(x.unit), dy = decompose(y.unit);
    int ea = x.e + dx.e, eb = y.e + dy.e;
    // signs are cubes (-1 = (-1)^3) and contribute nothing
    i64 r = i64(ea) * eq7(dy.unit) - i64(eb) * eq7(dx.unit) + eq6(dx.unit, dy.unit);
    return int(((r % 3) + 3) % 3);
}

} // namespace dcs
