#pragma once

// Trial-division factorization backed by a smallest-prime-factor sieve.
// Desk scale: everything in this project factors integers < ~10^12 whose
// prime support is < 10^6, so a sieve plus trial division is enough.

#include <utility>
#include <vector>

#include "dcs/base.hpp"

namespace dcs {

// Smallest prime factor table for [0, limit]; spf[1] = 1.
struct Sieve {
    std::vector<i64> spf;
    explicit Sieve(i64 limit) : spf(size_t(limit) + 1, 0) {
        if (limit >= 1) spf[1] = 1;
        for (i64 i = 2; i <= limit; ++i) {
            if (spf[size_t(i)] == 0) {
                for (i64 j = i; j <= limit; j += i)
                    if (spf[size_t(j)] == 0) spf[size_t(j)] = i;
            }
        }
    }
    bool is_prime(i64 n) const { return n >= 2 && spf[size_t(n)] == n; }
};

// (prime, exponent) pairs, prime-ascending. Plain trial division.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    assert(n != 0);
    n = iabs(n);
    std::vector<std::pair<i64, int>> fs;
    for (i64 d = 2; i128(d) * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            fs.push_back({d, e});
        }
    }
    if (n > 1) fs.push_back({n, 1});
    return fs;
}

inline bool is_prime_i64(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; i128(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Ascending primes in [2, limit].
inline std::vector<i64> primes_upto(i64 limit) {
    std::vector<bool> comp(size_t(std::max<i64>(limit + 1, 2)), false);
    std::vector<i64> ps;
    for (i64 i = 2; i <= limit; ++i) {
        if (!comp[size_t(i)]) {
            ps.push_back(i);
            for (i64 j = i * i; j <= limit; j += i) comp[size_t(j)] = true;
        }
    }
    return ps;
}

} // namespace dcs
