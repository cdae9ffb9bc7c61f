#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "errors.hpp"

namespace dmf {

// C(x, y) mod p by Lucas's theorem: the product over base-p digits.
inline int binom_mod_p(int p, long long x, long long y) {
    if (y < 0 || y > x) return 0;
    long long result = 1;
    while (x > 0 || y > 0) {
        int xd = static_cast<int>(x % p), yd = static_cast<int>(y % p);
        if (yd > xd) return 0;
        // C(xd, yd) for digits < p, computed directly
        long long num = 1, den = 1;
        for (int i = 0; i < yd; ++i) {
            num = (num * (xd - i)) % p;
            den = (den * (i + 1)) % p;
        }
        // invert den mod p by Fermat
        long long inv = 1, base = den, e = p - 2;
        while (e > 0) {
            if (e & 1) inv = (inv * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        result = (result * ((num * inv) % p)) % p;
        x /= p;
        y /= p;
    }
    return static_cast<int>(result);
}

// (-1)^j C(k-j, j) mod p, the coefficient sequence of the two-variable
// symmetric-function expansion used throughout the trace formulas.
inline int c_kj_mod_p(int p, long long k, long long j) {
    int b = binom_mod_p(p, k - j, j);
    if (j % 2 == 1) b = (p - b) % p;
    return b;
}

// Exact integer C(x, y); fits in unsigned long long for x <= 62.
inline unsigned long long binom_exact(int x, int y) {
    if (y < 0 || y > x) return 0;
    if (y > x - y) y = x - y;
    unsigned long long r = 1;
    for (int i = 1; i <= y; ++i) {
        r = r * static_cast<unsigned long long>(x - y + i) / i;
    }
    return r;
}

// Multinomial coefficient (a+b+c)! / (a! b! c!) mod p.
inline int multinom_mod_p(int p, long long a, long long b, long long c) {
    long long n = a + b + c;
    return static_cast<int>((static_cast<long long>(binom_mod_p(p, n, a)) * binom_mod_p(p, n - a, b)) % p);
}

// The type of a weight-k form is an integer mod q-1; we normalize
// representatives into 1..q-1 (so type 0 is stored as q-1).
inline int normalize_type(int q, long long l) {
    int m = q - 1;
    int r = static_cast<int>(((l % m) + m) % m);
    return r == 0 ? m : r;
}

// Dimension of the space of cusp forms of weight k and type l for level 1.
inline long long dim_cusp(int q, long long k, long long l) {
    if (q == 2) {
        if (k <= 2) return 0;
        return (k - 2 + 2) / 3;  // ceil((k-2)/3)
    }
    int ln = normalize_type(q, l);
    if (((k - 2 * ln) % (q - 1) + (q - 1)) % (q - 1) != 0) return 0;
    if (k < static_cast<long long>(ln) * (q + 1)) return 0;
    return 1 + (k - static_cast<long long>(ln) * (q + 1)) / (static_cast<long long>(q) * q - 1);
}

// Dimension of the subspace of double cusp forms.
inline long long dim_double_cusp(int q, long long k, long long l) {
    long long d = dim_cusp(q, k, l);
    if (d == 0) return 0;
    int ln = q == 2 ? 1 : normalize_type(q, l);
    return ln == 1 ? d - 1 : d;
}

// Index set P(k, l, q) for even q: those j < (k-2)/2 with j = l-1 mod (q-1)
// and C(k-2-j, j) odd.  Sorted ascending.
inline std::vector<long long> char2_index_set(int q, long long k, long long l) {
    // q must be a power of 2
    int t = q;
    while (t > 1 && t % 2 == 0) t /= 2;
    if (t != 1) throw OddCharacteristic("char2_index_set needs even q");
    long long kk = k - 2;
    int m = q - 1;
    long long l0 = ((l - 1) % m + m) % m;
    std::vector<long long> out;
    for (long long j = 0; 2 * j < kk; ++j) {
        if (j % m != l0) continue;
        if (binom_mod_p(2, kk - j, j) == 1) out.push_back(j);
    }
    return out;
}

// Stern-Brocot sequence: a_0 = a_1 = 1, a_{2m} = a_m + a_{m-1},
// a_{2m+1} = a_m.  Memoized behind a lock so concurrent scans are safe.
inline long long stern_brocot(long long m) {
    if (m < 0) throw error("stern_brocot needs m >= 0");
    static std::map<long long, long long> memo;
    static std::mutex mx;
    {
        std::lock_guard<std::mutex> lock(mx);
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
    }
    long long value;
    if (m <= 1) {
        value = 1;
    } else if (m % 2 == 0) {
        value = stern_brocot(m / 2) + stern_brocot(m / 2 - 1);
    } else {
        value = stern_brocot(m / 2);
    }
    std::lock_guard<std::mutex> lock(mx);
    memo[m] = value;
    return value;
}

}  // namespace dmf
