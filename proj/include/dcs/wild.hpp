#pragma once

// The completion of k at the ramified place over 3, emulated by exact
// arithmetic in Z[w]/3^N. Every nonzero x decomposes as
//
//     x = +- lambda^e * u,   u = 1 mod lambda  (a 1-unit),
//
// and a 1-unit expands as u = 1 + b1*lambda + b2*lambda^2 + b3*lambda^3 + ...
// The digits here are extracted greedily with least non-negative integer
// lifts, which reproduces the ledger identities
//
//     w = 1 - lambda,   3 = -w^2 lambda^2,   2 = -1 - lambda^2 - lambda^3 + O(lambda^4).

#include "dcs/eisenstein.hpp"

namespace dcs {

// Z[w]/3^N element. N is carried by the context (Wild3), not the value.
struct Zw {
    u64 a = 0, b = 0; // a + b*w, both mod 3^N
};

// Output of lambda_expand: sign, lambda-valuation and the first three digits.
// b1 is stored as its class mod 9 (the greedy digit lies in {0,1,2}; the
// class mod 9 is what Eq. (7) consumes), b2 and b3 mod 3.
struct LambdaExpansion {
    int sign = 1;       // x = sign * lambda^valuation * (1 + b1 L + b2 L^2 + b3 L^3 + ...)
    int valuation = 0;
    int b1 = 0; // mod 9
    int b2 = 0; // mod 3
    int b3 = 0; // mod 3
};

// Context for arithmetic mod 3^N.
class Wild3 {
  public:
    explicit Wild3(int N = 14);

    int prec() const { return N_; }
    u64 modulus() const { return M_; }

    Zw from_int(i64 a, i64 b = 0) const;
    Zw from_eis(const EisensteinInt& z) const { return from_int(z.a, z.b); }
    Zw one() const { return from_int(1); }
    Zw omega() const { return from_int(0, 1); }

    Zw add(Zw x, Zw y) const;
    Zw sub(Zw x, Zw y) const;
    Zw mul(Zw x, Zw y) const;
    Zw neg(Zw x) const;
    Zw pow(Zw x, int e) const;
    // Inverse of a unit (norm prime to 3).
    Zw inv(Zw x) const;
    bool is_zero(Zw x) const { return x.a == 0 && x.b == 0; }

    // lambda-adic valuation of the class of x (via v_3 of the lifted norm);
    // reliable only while < 2N - pad. Returns a large value for x = 0.
    int vlambda(Zw x) const;
    // Exact division by lambda: x * (2+w) / 3. Requires lambda | x.
    Zw div_lambda(Zw x) const;

    // Residue in F_3 = {0,1,2} under w -> 1.
    int residue(Zw x) const { return int((x.a + x.b) % 3); }

    // x = sign * lambda^e * u with u a 1-unit; strips e and the sign.
    // Throws precision_error when the valuation cannot be trusted.
    struct Decomp { int sign; int e; Zw unit; };
    Decomp decompose(Zw x) const;

    // Greedy digits (b1..bk), each in {0,1,2}, of a 1-unit.
    std::vector<int> digits(Zw one_unit, int k) const;

    // Local element at the ramified place: value = lambda^e * unit.
    struct Local { int e = 0; Zw unit; };

    // Embeds an exact element of k*: num/den with den > 0 rational integer.
    // Uses 1/3 = lambda^{-2} * (-w), from 3 = -w^2 lambda^2.
    Local embed(const EisRat& x) const;

    LambdaExpansion lambda_expand(const EisRat& x, int depth = 5) const;
    LambdaExpansion lambda_expand_local(Local x, int depth = 5) const;

    // Hilbert symbol pieces at the wild place, from CTKS:
    //   Eq.(6):  (u_b, u_c) = b1 c1 (b1 - c1) - b1 c2 + b2 c1       (digits mod 3)
    //   Eq.(7):  (lambda, u_b) = (b1 - b1^2)/3 + b1 b2 - b3          (b1 mod 9)
    // Eq.(7) is applied after multiplying u_b by a power of w to force
    // b1 = 0 mod 3 (valid since (lambda, w) = 0); on that fiber the value is
    // representation-independent, which eq7 asserts by scanning all matching
    // (b1 mod 9, b2, b3) triples.
    int eq6(Zw u, Zw v) const;
    int eq7(Zw u) const;

    // Full symbol ( . , . )_{w3} in Z/3 for local elements.
    int symbol(Local x, Local y) const;

  private:
    int N_;
    u64 M_;  // 3^N
    u64 M3_; // 3^(N+1), for exact lambda-division
};

} // namespace dcs
