#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcs/localsolve.hpp"
#include "dcs/surface.hpp"

using namespace dcs;

TEST_CASE("parse_surface order a1,a2,a3,a0") {
    auto s = parse_surface("17,17,-22,11");
    REQUIRE(s.has_value());
    CHECK(s->a0 == 11);
    CHECK(s->a1 == 17);
    CHECK(s->a3 == -22);
    size_t pos = 0;
    CHECK(!parse_surface("1,2,3", &pos));
    CHECK(!parse_surface("1,2,x,4", &pos));
    CHECK(pos == 4);
    CHECK(!parse_surface("1,2,3,0", &pos)); // zero coefficient rejected
    CHECK(!parse_surface("1,2,3,4,5", &pos));
}

TEST_CASE("normalize") {
    // (a0,a1,a2,a3) = (3,1,1,1) unchanged
    auto n = normalize(Surface{3, 1, 1, 1});
    CHECK(n.s == Surface{3, 1, 1, 1});
    CHECK(!n.insoluble_by_construction);

    // (24, 8, 1, 1) -> (3, 1, 1, 1): cube 8 out of a1 and out of a0
    auto n2 = normalize(Surface{24, 8, 1, 1});
    CHECK(n2.s == Surface{3, 1, 1, 1});
    CHECK(n2.scale[0] == 2);
    CHECK(n2.scale[1] == 2);
    // transported raw point (1,2,2) of 8u^3+v^3+w^3=24 lands on the new model
    auto x = n2.transport(1, 2, 2);
    i128 lhs = i128(n2.s.a1) * x[1] * x[1] * x[1] + i128(n2.s.a2) * x[2] * x[2] * x[2] +
               i128(n2.s.a3) * x[3] * x[3] * x[3];
    CHECK(lhs == i128(n2.s.a0) * x[0] * x[0] * x[0]);

    // cube-free reduction of a single coefficient: a1 = 8*5 -> 5
    auto n3 = normalize(Surface{2, 40, 1, 1});
    CHECK(n3.s.a1 == 5);
    CHECK(n3.scale[1] == 2);

    // gcd division: (a0,a1,a2,a3) = (4, 2, 2, 2) -> divide gcd 2 through
    auto n4 = normalize(Surface{4, 2, 2, 2});
    CHECK(n4.s == Surface{2, 1, 1, 1});
    CHECK(n4.gcd_removed == 2);
    CHECK(!n4.insoluble_by_construction);

    // a gcd prime power not dividing a0: flagged locally insoluble
    auto n5 = normalize(Surface{1, 2, 2, 2});
    CHECK(n5.insoluble_by_construction);
    CHECK(n5.insoluble_prime == 2);
    CHECK(!is_ELS(Surface{1, 2, 2, 2}).els());

    // every raw brute-force point transports onto the normalized model
    Surface raw{24, 8, 1, 1};
    for (auto& q : brute_force_points(raw, 12)) {
        auto y = n2.transport(q[0], q[1], q[2]);
        i128 l = i128(n2.s.a1) * y[1] * y[1] * y[1] + i128(n2.s.a2) * y[2] * y[2] * y[2] +
                 i128(n2.s.a3) * y[3] * y[3] * y[3];
        CHECK(l == i128(n2.s.a0) * y[0] * y[0] * y[0]);
    }
}

TEST_CASE("brauer_classify") {
    // a0 = a3 = 1, a1 = a2 = 1: a0 a3 / a1 a2 = 1 is a cube -> trivial
    CHECK(brauer_classify(Surface{1, 1, 1, 1}).algebraic == AlgebraicPart::Trivial);
    // U_{2,5,17}: coefficients (-1, 2, 85, 68) -> Z/3
    CHECK(brauer_classify(Surface{-1, 2, 85, 68}).algebraic == AlgebraicPart::Z3);
    // a1 a2 a3 = 2 -> transcendental 2-torsion present
    CHECK(brauer_classify(Surface{5, 2, 1, 1}).transcendental2);
    CHECK(!brauer_classify(Surface{5, 4, 1, 1}).transcendental2);
    CHECK(brauer_classify(Surface{7, 2, 8, 27}).transcendental2); // 2 * 6^3

    // invariance under permutations of (a1,a2,a3) and under cube rescaling
    Rng rng(23);
    for (int i = 0; i < 300; ++i) {
        Surface s{rng.range(-20, 20), rng.range(-20, 20), rng.range(-20, 20), rng.range(-20, 20)};
        if (!s.valid()) continue;
        Surface n = normalize(s).s;
        auto c = brauer_classify(n);
        Surface perm{n.a0, n.a3, n.a1, n.a2};
        auto cp = brauer_classify(perm);
        CHECK(c.algebraic == cp.algebraic);
        CHECK(c.transcendental2 == cp.transcendental2);
        Surface scaled{n.a0, checked_mul(n.a1, 27), n.a2, n.a3};
        auto cs = brauer_classify(normalize(scaled).s);
        CHECK(c.algebraic == cs.algebraic);
        CHECK(c.transcendental2 == cs.transcendental2);
    }
}

TEST_CASE("transcendental2 against brute force") {
    // oracle: a1 a2 a3 = +-2 n^3 for some n <= bound
    auto oracle = [](i64 prod) {
        for (i64 n = 1; 2 * n * n * n <= iabs(prod); ++n)
            if (2 * n * n * n == iabs(prod)) return true;
        return false;
    };
    for (i64 a1 = -30; a1 <= 30; ++a1)
        for (i64 a2 = -30; a2 <= 30; a2 += 7)
            for (i64 a3 = -30; a3 <= 30; a3 += 3) {
                if (!a1 || !a2 || !a3) continue;
                Surface s{1, a1, a2, a3};
                CHECK(brauer_classify(s).transcendental2 == oracle(checked_mul(checked_mul(a1, a2), a3)));
            }
}

TEST_CASE("decomposition groups for U_{2,5,q}") {
    Surface s{-1, 2, 85, 68}; // q = 17
    CHECK(decomposition_group(s, 3) == DecompGroup::Q);  // lambda*nu = 4/5 cube in Q_3
    CHECK(decomposition_group(s, 2) == DecompGroup::R);  // lambda/nu = 5 cube in Q_2
    CHECK(decomposition_group(s, 5) == DecompGroup::S);  // lambda = 2 cube in Q_5
    CHECK(decomposition_group(s, 17) == DecompGroup::E); // both cubes at q
    // E at good primes whenever the relevant classes are cubes
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        Surface t{rng.range(1, 40), rng.range(1, 40), rng.range(1, 40), rng.range(1, 40)};
        for (i64 p : {i64(7), i64(11), i64(13)}) {
            if (checked_mul(3, checked_mul(t.form_product(), t.a0)) % p == 0) continue;
            auto tp = table_params(t);
            bool l = is_cube_local(tp.lambda, p), n = is_cube_local(tp.nu, p);
            if (l && n) CHECK(decomposition_group(t, p) == DecompGroup::E);
        }
    }
}

TEST_CASE("is_locally_rational") {
    Surface uprime{2, 125, 85, 68};
    CHECK(is_locally_rational(uprime, 2));
    CHECK(is_locally_rational(uprime, 3));
    CHECK(is_locally_rational(uprime, 17));
    CHECK(!is_locally_rational(uprime, 5));
    CHECK(is_locally_rational(uprime, 0)); // real place, always
    // U_{l,p,q} at v=q: l * pq / q l^2 is a cube in Z_q
    CHECK(is_locally_rational(Surface{-1, 2, 85, 68}, 17));
    // generic all-non-cube case
    CHECK(!is_locally_rational(Surface{1, 1, 1, 7}, 7));
}
