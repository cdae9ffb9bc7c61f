#include "catch_amalgamated.hpp"

#include <random>

#include "dmf/combinat.hpp"
#include "dmf/errors.hpp"
#include "dmf/gf.hpp"
#include "dmf/poly.hpp"
#include "dmf/traces.hpp"

using namespace dmf;

namespace {

// Independent transcription of the degree-1 closed form:
// sum over j = l-1 mod (q-1), 2j < k-2 of (-1)^j C(k-2-j, j) X^j at X = wp.
PolyA deg1_form_at(const FieldDesc& F, const PolyA& wp, long long k, long long l) {
    PolyA acc = PolyA::zero(F);
    long long kk = k - 2;
    int m = F.q == 2 ? 1 : F.q - 1;
    long long l0 = ((l - 1) % m + m) % m;
    for (long long j = 0; 2 * j < kk; ++j) {
        if (j % m != l0) continue;
        int c = c_kj_mod_p(F.p, kk, j);
        if (c != 0) acc = acc + pow_poly(wp, j).scaled(F.from_int(c));
    }
    return acc;
}

}  // namespace

TEST_CASE("weight 12 type 0 eigenvalue is the prime cubed, all primes of degree up to 4") {
    const FieldDesc& F = field_create(3, 1);
    TraceOptions opts;
    for (int d = 1; d <= 4; ++d)
        for (const PolyA& wp : monic_irreducibles(F, d)) {
            TraceQuery qy{&F, wp, 1, 12, 0};
            CHECK(trace_general(qy, opts) == pow_poly(wp, 3));
        }
}

TEST_CASE("weight 14 type 1 trace is 1 + prime^4, all primes of degree up to 4") {
    const FieldDesc& F = field_create(3, 1);
    TraceOptions opts;
    PolyA one = PolyA::constant(F, 1);
    for (int d = 1; d <= 4; ++d)
        for (const PolyA& wp : monic_irreducibles(F, d)) {
            TraceQuery qy{&F, wp, 1, 14, 1};
            CHECK(trace_general(qy, opts) == one + pow_poly(wp, 4));
        }
}

TEST_CASE("a degree 3 prime still satisfies the degree 1 closed form") {
    const FieldDesc& F = field_create(3, 1);
    PolyA wp = parse_poly(F, "T^3+2*T+1");
    TraceOptions opts;
    for (long long k = 2; k <= 30; ++k)
        for (long long l = 1; l <= 2; ++l) {
            TraceQuery qy{&F, wp, 1, k, l};
            PolyA expect = type_compatible(F.q, k, l) ? deg1_form_at(F, wp, k, l)
                                                      : PolyA::zero(F);
            CHECK(trace_general(qy, opts) == expect);
            CHECK(trace_auto(qy, opts).method == "general");
        }
}

TEST_CASE("degree 1 closed form against the census") {
    TraceOptions opts;
    for (int q : {2, 3, 5, 9}) {
        auto [p, r] = q == 9 ? std::pair{3, 2} : std::pair{q, 1};
        const FieldDesc& F = field_create(p, r);
        for (const PolyA& wp : monic_irreducibles(F, 1))
            for (long long k = 2; k <= 24; ++k)
                for (long long l = 1; l <= std::max(1, F.q - 1); l += std::max(1, F.q / 2)) {
                    TraceQuery qy{&F, wp, 1, k, l};
                    CHECK(trace_deg1(qy) == trace_general(qy, opts));
                }
    }
}

TEST_CASE("degree 2 closed form against the census") {
    TraceOptions opts;
    for (int q : {3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        std::vector<TraceQuery> shapes;
        for (const PolyA& wp : monic_irreducibles(F, 2)) shapes.push_back({&F, wp, 1, 0, 0});
        for (const PolyA& wp : monic_irreducibles(F, 1)) shapes.push_back({&F, wp, 2, 0, 0});
        for (TraceQuery qy : shapes)
            for (long long k = 2; k <= 30; ++k)
                for (long long l = 1; l <= q - 1; ++l) {
                    qy.k = k;
                    qy.l = l;
                    CHECK(trace_deg2(qy) == trace_general(qy, opts));
                }
    }
}

TEST_CASE("characteristic 2 closed form against the census") {
    TraceOptions opts;
    for (int r : {1, 2}) {
        const FieldDesc& F = field_create(2, r);
        for (int d = 1; d <= 3; ++d)
            for (const PolyA& wp : monic_irreducibles(F, d))
                for (int n = 1; n <= 2; ++n) {
                    std::vector<long long> weights;
                    for (long long k = 2; k <= 40; ++k) weights.push_back(k);
                    for (long long l = 1; l <= F.q - 1; ++l) {
                        std::vector<PolyA> table = trace_table(F, wp, n, l, weights, opts);
                        for (size_t i = 0; i < weights.size(); ++i) {
                            TraceQuery qy{&F, wp, n, weights[i], l};
                            CHECK(trace_char2(qy) == table[i]);
                        }
                    }
                }
    }
}

TEST_CASE("q=2 generating series identity to order 64") {
    const FieldDesc& F = field_create(2, 1);
    PolyA t = PolyA::var(F);
    std::vector<PolyA> c;
    for (long long k = 0; k <= 64; ++k) {
        TraceQuery qy{&F, t, 1, k + 2, 1};
        c.push_back(trace_char2(qy));
    }
    // (sum c_k X^k) * (1 - X - T X^2)(1 - T X^2) = X; over F_2 the quartic
    // expands to 1 + X + T X^3 + T^2 X^4
    std::vector<PolyA> quart{PolyA::constant(F, 1), PolyA::constant(F, 1), PolyA::zero(F), t,
                             t * t};
    for (long long k = 0; k <= 64; ++k) {
        PolyA conv = PolyA::zero(F);
        for (long long i = 0; i <= 4 && i <= k; ++i) conv = conv + quart[i] * c[k - i];
        if (k == 1)
            CHECK(conv == PolyA::constant(F, 1));
        else
            CHECK(conv.is_zero());
    }
}

TEST_CASE("weight 177 worked value") {
    const FieldDesc& F = field_create(2, 1);
    TraceQuery qy{&F, PolyA::var(F), 1, 177, 1};
    CHECK(trace_char2(qy) == parse_poly(F, "T^80+T^64+T^48+T^16+1"));
}

TEST_CASE("power of two weights collapse") {
    for (int r : {1, 2}) {
        const FieldDesc& F = field_create(2, r);
        int q = F.q;
        std::vector<PolyA> primes{PolyA::var(F)};
        primes.push_back(monic_irreducibles(F, 2).front());
        for (const PolyA& wp : primes)
            for (int n = 1; n <= 2; ++n)
                for (int s = 1; s <= r; ++s)
                    for (int m = 0; m <= 3; ++m) {
                        long long qm = 1;
                        for (int i = 0; i < m; ++i) qm *= q;
                        long long base = (1LL << s) * qm;
                        if (base + 2 > 260) continue;
                        long long half = 1LL << (s - 1);

                        // case 1: weight 2^s q^m + 1
                        {
                            long long w = base + 1;
                            long long l = (1LL << (r - 1)) * w;
                            TraceQuery qy{&F, wp, n, w, l};
                            bool hit = q == 2 || (l - 1) % (q - 1) == 0;
                            CHECK(trace_char2(qy) ==
                                  (hit ? PolyA::constant(F, 1) : PolyA::zero(F)));
                        }
                        // case 2: weight 2^s q^m, type 2^{s-1}
                        {
                            TraceQuery qy{&F, wp, n, base, half};
                            PolyA expect = PolyA::zero(F);
                            long long qj = 1;
                            for (int j = 0; j < m; ++j) {
                                expect = expect + pow_poly(wp, n * (half * qj - 1));
                                qj *= q;
                            }
                            CHECK(trace_char2(qy) == expect);
                        }
                        // case 3: weight 2^s q^m + 2, type 2^{s-1} + 1
                        {
                            TraceQuery qy{&F, wp, n, base + 2, half + 1};
                            PolyA expect =
                                q == 2 ? PolyA::constant(F, 1) : PolyA::zero(F);
                            long long qj = 1;
                            for (int j = 0; j < m; ++j) {
                                expect = expect + pow_poly(wp, n * half * qj);
                                qj *= q;
                            }
                            CHECK(trace_char2(qy) == expect);
                        }
                        // case 4: weight 3 * 2^s q^m + 1
                        {
                            long long w = 3 * base + 1;
                            long long l = (1LL << (r - 1)) * w;
                            TraceQuery qy{&F, wp, n, w, l};
                            PolyA expect = PolyA::zero(F);
                            if (s == r) {
                                expect = pow_poly(wp, n * qm * q);
                                if (q == 2) expect = expect + PolyA::constant(F, 1);
                            }
                            CHECK(trace_char2(qy) == expect);
                        }
                    }
    }
}

TEST_CASE("one-dimensional spaces have multiplicative traces") {
    TraceOptions opts;
    for (int q : {3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        std::vector<PolyA> primes = monic_irreducibles(F, 1);
        primes.push_back(monic_irreducibles(F, 2).front());
        for (const PolyA& wp : primes)
            for (long long k = 4; k <= 30; ++k)
                for (long long l = 1; l <= q - 1; ++l) {
                    if (dim_cusp(q, k, l) != 1) continue;
                    TraceQuery q1{&F, wp, 1, k, l};
                    TraceQuery q2{&F, wp, 2, k, l};
                    PolyA t1 = trace_general(q1, opts);
                    CHECK(trace_general(q2, opts) == t1 * t1);
                }
    }
}

TEST_CASE("type gate and empty spaces give zero") {
    TraceOptions opts;
    for (int q : {2, 3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        PolyA t = PolyA::var(F);
        for (long long k = 2; k <= 14; ++k)
            for (long long l = 1; l <= std::max(1, q - 1); ++l) {
                TraceQuery qy{&F, t, 1, k, l};
                if (!type_compatible(q, k, l) || dim_cusp(q, k, l) == 0)
                    CHECK(trace_general(qy, opts).is_zero());
            }
    }
}

TEST_CASE("trace table consistency and unscaling") {
    const FieldDesc& F = field_create(3, 1);
    PolyA t = PolyA::var(F);
    TraceOptions opts;
    std::vector<long long> weights;
    for (long long k = 4; k <= 40; k += 2) weights.push_back(k);
    std::vector<PolyA> table = trace_table(F, t, 1, 1, weights, opts);
    REQUIRE(table.size() == weights.size());
    for (size_t i = 0; i < weights.size(); ++i) {
        TraceQuery qy{&F, t, 1, weights[i], 1};
        TraceResult res = trace_auto(qy, opts);
        CHECK(res.value == table[i]);
        CHECK(unscale_trace(res.value, t, 1) == res.value * t);
    }

    // parallel execution returns identical values
    TraceOptions par{6, 4};
    CHECK(trace_table(F, t, 1, 1, weights, par) == table);
}

TEST_CASE("symmetric function evaluations agree with their recurrences") {
    for (int q : {3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        std::mt19937 rng(97);
        std::uniform_int_distribution<int> cd(0, q - 1);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> ac(3), bc(4);
            for (int& x : ac) x = cd(rng);
            for (int& x : bc) x = cd(rng);
            PolyA a(F, std::move(ac)), b(F, std::move(bc));
            for (long long m = 0; m <= 20; ++m) {
                CHECK(sym_poly_eval(SymKind::homogeneous, m, a, b) ==
                      sym_poly_recurrence(SymKind::homogeneous, m, a, b));
                CHECK(sym_poly_eval(SymKind::power, m, a, b) ==
                      sym_poly_recurrence(SymKind::power, m, a, b));
            }
            // h and p base cases
            CHECK(sym_poly_eval(SymKind::homogeneous, 0, a, b) == PolyA::constant(F, 1));
            CHECK(sym_poly_eval(SymKind::homogeneous, 1, a, b) == a);
            CHECK(sym_poly_eval(SymKind::power, 0, a, b) == PolyA::constant(F, 2 % F.p));
            CHECK(sym_poly_eval(SymKind::power, 1, a, b) == a);
        }
    }
}

TEST_CASE("query validation") {
    const FieldDesc& F3 = field_create(3, 1);
    TraceOptions opts;
    CHECK_THROWS_AS(trace_general({&F3, parse_poly(F3, "T^2"), 1, 12, 1}, opts), NotIrreducible);
    CHECK_THROWS_AS(trace_general({&F3, parse_poly(F3, "2*T"), 1, 12, 1}, opts), NotMonic);
    CHECK_THROWS_AS(trace_general({&F3, parse_poly(F3, "T^7+2*T^2+1"), 1, 12, 1}, opts),
                    CapExceeded);
    CHECK_THROWS_AS(trace_deg1({&F3, parse_poly(F3, "T^2+1"), 1, 12, 1}), WrongDegree);
    CHECK_THROWS_AS(trace_deg2({&F3, PolyA::var(F3), 1, 12, 1}), WrongDegree);
    CHECK_THROWS_AS(trace_char2({&F3, PolyA::var(F3), 1, 12, 1}), OddCharacteristic);
    const FieldDesc& F2 = field_create(2, 1);
    CHECK_THROWS_AS(trace_deg2({&F2, PolyA::var(F2), 2, 12, 1}), EvenCharacteristic);
    CHECK_THROWS_AS(trace_mod_pn({&F3, PolyA::var(F3), 2, 12, 1}, 3, opts), RangeViolation);
}
