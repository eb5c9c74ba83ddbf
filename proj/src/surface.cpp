#include "dcs/surface.hpp"

#include "dcs/localsolve.hpp"
#include "dcs/primes.hpp"

namespace dcs {

std::optional<Surface> parse_surface(const std::string& spec, size_t* err_pos) {
    auto fail = [&](size_t pos) -> std::optional<Surface> {
        if (err_pos) *err_pos = pos;
        return std::nullopt;
    };
    std::array<i64, 4> v{};
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (i > 0) {
            if (pos >= spec.size() || spec[pos] != ',') return fail(pos);
            ++pos;
        }
        size_t used = 0;
        try {
            v[size_t(i)] = std::stoll(spec.substr(pos), &used);
        } catch (...) {
            return fail(pos);
        }
        if (used == 0) return fail(pos);
        pos += used;
    }
    if (pos != spec.size()) return fail(pos);
    Surface s{v[3], v[0], v[1], v[2]}; // input order a1,a2,a3,a0
    if (!s.valid()) return fail(0);
    return s;
}

Normalized normalize(const Surface& raw) {
    if (!raw.valid()) throw std::domain_error("normalize: zero coefficient");
    Normalized out;
    Surface s = raw;

    // Divide out gcd(a1,a2,a3) prime power by prime power, as far as a0
    // allows; a leftover power that does not divide a0 kills Z_p solubility.
    i64 d = gcd64(gcd64(s.a1, s.a2), s.a3);
    if (d > 1) {
        for (auto [p, e] : factorize(d)) {
            int e0 = valuation_int(s.a0, p);
            int k = std::min(e, e0);
            i64 pk = i64(ipow_u64(u64(p), k));
            s.a0 /= pk; s.a1 /= pk; s.a2 /= pk; s.a3 /= pk;
            out.gcd_removed = checked_mul(out.gcd_removed, pk);
            if (e > e0 && !out.insoluble_by_construction) {
                out.insoluble_by_construction = true;
                out.insoluble_prime = p;
            }
        }
    }

    // Cube-free reduction with recorded transport scales.
    std::array<i64*, 4> as{&s.a0, &s.a1, &s.a2, &s.a3};
    for (int i = 0; i < 4; ++i) {
        i64 c = 1;
        for (auto [p, e] : factorize(*as[size_t(i)]))
            for (int j = 0; j < e / 3; ++j) c = checked_mul(c, p);
        out.scale[size_t(i)] = c;
        *as[size_t(i)] /= checked_mul(c, checked_mul(c, c));
    }
    out.s = s;
    return out;
}

std::array<Rational, 3> cross_ratios(const Surface& s) {
    return {Rational{checked_mul(s.a0, s.a1), checked_mul(s.a2, s.a3)},
            Rational{checked_mul(s.a0, s.a2), checked_mul(s.a1, s.a3)},
            Rational{checked_mul(s.a0, s.a3), checked_mul(s.a1, s.a2)}};
}

BrauerShape brauer_classify(const Surface& s) {
    BrauerShape shape;
    shape.algebraic = AlgebraicPart::Z3;
    // all six {i,j | h,l} splittings; a ratio is a cube iff its inverse is
    for (const Rational& r : cross_ratios(s)) {
        if (is_cube_rational(r) || is_cube_rational(Rational{1} / r)) {
            shape.algebraic = AlgebraicPart::Trivial;
            break;
        }
    }
    shape.transcendental2 = is_cube_rational(Rational{s.form_product(), 2});
    return shape;
}

TableParams table_params(const Surface& s) {
    return {Rational{s.a1, s.a0}, Rational{s.a2, s.a0},
            Rational{checked_mul(-s.a3, s.a0), checked_mul(s.a1, s.a2)}};
}

std::string decomp_group_name(DecompGroup g) {
    switch (g) {
        case DecompGroup::E: return "e";
        case DecompGroup::T: return "t";
        case DecompGroup::R: return "r";
        case DecompGroup::S: return "s";
        case DecompGroup::Q: return "q";
        case DecompGroup::G: return "G";
    }
    return "?";
}

DecompGroup decomposition_group(const TableParams& tp, i64 p) {
    bool l = is_cube_local(tp.lambda, p);
    bool n = is_cube_local(tp.nu, p);
    if (l && n) return DecompGroup::E;
    if (n) return DecompGroup::T;
    if (is_cube_local(tp.lambda / tp.nu, p)) return DecompGroup::R;
    if (l) return DecompGroup::S;
    if (is_cube_local(tp.lambda * tp.nu, p)) return DecompGroup::Q;
    return DecompGroup::G;
}

DecompGroup decomposition_group(const Surface& s, i64 p) {
    return decomposition_group(table_params(s), p);
}

bool is_locally_rational(const Surface& s, i64 v) {
    if (v == 0) return true; // every real number is a cube and X(R) != {}
    bool cube = false;
    for (const Rational& r : cross_ratios(s))
        if (is_cube_local(r, v)) { cube = true; break; }
    if (!cube) return false;
    return has_Qp_points_projective(s, v);
}

} // namespace dcs
