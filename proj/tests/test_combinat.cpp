#include "catch_amalgamated.hpp"

#include <algorithm>
#include <vector>

#include "dmf/combinat.hpp"
#include "dmf/errors.hpp"

using namespace dmf;

TEST_CASE("binomials by Lucas agree with exact integers") {
    for (int p : {2, 3, 5, 7})
        for (long long x = 0; x <= 40; ++x)
            for (long long y = 0; y <= x; ++y)
                CHECK(binom_mod_p(p, x, y) ==
                      static_cast<int>(binom_exact(static_cast<int>(x), static_cast<int>(y)) % p));
    CHECK(binom_mod_p(5, 1000000, 0) == 1);
    CHECK(binom_mod_p(2, 7, 3) == 1);  // 35 is odd
    // out-of-range is zero
    CHECK(binom_mod_p(3, 4, 7) == 0);
}

TEST_CASE("central binomials vanish mod 2 below a Mersenne top") {
    for (int m = 1; m <= 10; ++m) {
        long long top = (1LL << m) - 1;
        for (long long j = 1; j <= (1LL << (m - 1)); ++j)
            CHECK(binom_mod_p(2, top - j, j) == 0);
    }
}

TEST_CASE("trace formula coefficients c_kj") {
    for (long long k = 0; k <= 30; ++k) CHECK(c_kj_mod_p(3, k, 0) == 1);
    CHECK(c_kj_mod_p(3, 10, 2) == 1);  // C(8,2) = 28
    // vanishing outside 2j <= k
    CHECK(c_kj_mod_p(5, 6, 4) == 0);

    // symmetry around k = p^m - 1
    for (int p : {2, 3, 5})
        for (int m = 1; m <= 3; ++m) {
            long long k = 1;
            for (int i = 0; i < m; ++i) k *= p;
            k -= 1;
            for (long long N = 1; N <= k; ++N)
                for (long long j = N; j <= k; ++j)
                    CHECK(c_kj_mod_p(p, k + N, j) == c_kj_mod_p(p, k - N, j - N));
        }
}

TEST_CASE("reflection identity at k = p^m - 1") {
    for (int p : {2, 3, 5})
        for (int m = 1; m <= 2; ++m) {
            long long k = 1;
            for (int i = 0; i < m; ++i) k *= p;
            k -= 1;
            for (long long x = 0; x <= k; ++x)
                for (long long y = 0; y <= x; ++y) {
                    int lhs = binom_mod_p(p, x, y);
                    if (x % 2 == 1) lhs = (p - lhs) % p;
                    int rhs = binom_mod_p(p, k - y, k - x);
                    if (y % 2 == 1) rhs = (p - rhs) % p;
                    CHECK(lhs == rhs);
                }
        }
}

TEST_CASE("type normalization") {
    CHECK(normalize_type(3, 1) == 1);
    CHECK(normalize_type(3, 0) == 2);
    CHECK(normalize_type(3, 2) == 2);
    CHECK(normalize_type(3, -1) == 1);
    CHECK(normalize_type(5, -3) == 1);
    CHECK(normalize_type(2, 7) == 1);
    for (int q : {2, 3, 4, 5, 9})
        for (long long l = -10; l <= 10; ++l) {
            int ln = normalize_type(q, l);
            CHECK(ln >= 1);
            CHECK(ln <= std::max(q - 1, 1));
            CHECK(((l - ln) % std::max(q - 1, 1)) == 0);
        }
}

TEST_CASE("cusp form dimensions") {
    // one-dimensional pinned cases
    CHECK(dim_cusp(3, 12, 0) == 1);
    CHECK(dim_cusp(3, 10, 0) == 1);
    CHECK(dim_cusp(3, 10, 2) == 1);
    CHECK(dim_cusp(3, 16, 0) == 2);
    CHECK(dim_cusp(3, 24, 1) == 3);
    // weight 2 carries no cusp forms
    for (int q : {2, 3, 4, 5, 9}) CHECK(dim_cusp(q, 2, 1) == 0);
    // wrong type is zero
    CHECK(dim_cusp(3, 13, 1) == 0);
    CHECK(dim_cusp(5, 12, 1) == 0);
    // q = 2 closed form
    for (long long k = 2; k <= 60; ++k)
        CHECK(dim_cusp(2, k, 1) == (k - 2 + 2) / 3);  // ceil((k-2)/3)

    CHECK(dim_double_cusp(3, 12, 1) == dim_cusp(3, 12, 1) - 1);
    CHECK(dim_double_cusp(3, 12, 0) == dim_cusp(3, 12, 0));
    CHECK(dim_double_cusp(3, 2, 1) == 0);
}

TEST_CASE("characteristic 2 index sets") {
    std::vector<long long> p12 = char2_index_set(4, 12, 1);
    CHECK(p12 == std::vector<long long>{0, 3});

    for (int m = 2; m <= 6; ++m)
        CHECK(char2_index_set(2, (1LL << m) + 1, 1) == std::vector<long long>{0});

    // weight 3 over F_2 is the smallest cusp form, eigenvalue 1: index set {0}
    CHECK(char2_index_set(2, 3, 1) == std::vector<long long>{0});
    CHECK(char2_index_set(2, 2, 1).empty());
    CHECK_THROWS_AS(char2_index_set(3, 12, 1), OddCharacteristic);

    for (int q : {2, 4, 8})
        for (long long k = 3; k <= 100; ++k)
            for (long long l = 1; l <= q - 1; ++l) {
                auto P = char2_index_set(q, k, l);
                CHECK(std::is_sorted(P.begin(), P.end()));
                for (long long j : P) {
                    CHECK(2 * j < k - 2);
                    CHECK((j - (l - 1)) % (q - 1) == 0);
                    CHECK(binom_mod_p(2, k - 2 - j, j) == 1);
                }
            }
}

TEST_CASE("index set size is bounded by the dimension") {
    for (int q : {2, 4})
        for (long long k = 3; k <= 200; ++k)
            for (long long l = 1; l <= q - 1; ++l) {
                if (q > 2 && (k - 2 * l) % (q - 1) != 0) continue;
                CHECK(static_cast<long long>(char2_index_set(q, k, l).size()) <=
                      dim_cusp(q, k, l));
            }
}

TEST_CASE("Stern-Brocot sequence") {
    CHECK(stern_brocot(0) == 1);
    CHECK(stern_brocot(1) == 1);
    CHECK(stern_brocot(2) == 2);
    CHECK(stern_brocot(4) == 3);
    for (long long m = 1; m <= 250; ++m) {
        CHECK(stern_brocot(2 * m) == stern_brocot(m) + stern_brocot(m - 1));
        CHECK(stern_brocot(2 * m + 1) == stern_brocot(m));
    }

    // running maxima are Fibonacci numbers
    std::vector<long long> fib{1, 1};
    for (int i = 2; i <= 13; ++i) fib.push_back(fib[i - 1] + fib[i - 2]);
    for (int N = 1; N <= 12; ++N) {
        long long best = 0;
        for (long long k = 0; k < (1LL << N); ++k) best = std::max(best, stern_brocot(k));
        CHECK(best == fib[N]);  // F_{N+1} with F_1 = F_2 = 1
    }

    // size of the q=2 index set in terms of the sequence
    for (long long k = 1; k <= 200; ++k) {
        long long N = static_cast<long long>(char2_index_set(2, k + 2, 1).size());
        CHECK(N == stern_brocot(k) - (k % 2 == 0 ? 1 : 0));
    }
}

TEST_CASE("multinomial coefficients") {
    // C(a+b+c; a, b, c) via double binomial
    CHECK(multinom_mod_p(5, 2, 2, 2) == static_cast<int>(90 % 5));
    CHECK(multinom_mod_p(3, 1, 1, 1) == 0);  // 6 mod 3
    CHECK(multinom_mod_p(7, 0, 0, 0) == 1);
    for (long long a = 0; a <= 6; ++a)
        for (long long b = 0; b <= 6; ++b)
            for (long long c = 0; c <= 6; ++c) {
                long long n = a + b + c;
                long long exact =
                    static_cast<long long>(binom_exact(static_cast<int>(n), static_cast<int>(a))) *
                    static_cast<long long>(binom_exact(static_cast<int>(n - a), static_cast<int>(b)));
                for (int p : {2, 3, 5}) CHECK(multinom_mod_p(p, a, b, c) == exact % p);
            }
}
