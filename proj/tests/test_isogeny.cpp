#include "catch_amalgamated.hpp"

#include <map>
#include <set>

#include "dmf/errors.hpp"
#include "dmf/gf.hpp"
#include "dmf/isogeny.hpp"
#include "dmf/poly.hpp"

using namespace dmf;

namespace {

int census_lookup(const Census& C, const PolyA& a, int b) {
    for (const IsoCount& row : C.rows)
        if (row.cls.a == a && row.cls.b == b) return row.count;
    return -1;  // distinguish "absent" from "count 0"
}

}  // namespace

// Direct enumeration oracle: over the prime field A/(T-x), a rank-2 Drinfeld
// module is phi_T = x + alpha*tau + beta*tau^2 with beta != 0, its Frobenius
// satisfies X^2 + beta^{-1} alpha X - beta^{-1}(T-x), and no two distinct
// (alpha, beta) are isomorphic because c^{q-1} = 1 for every unit c of F_q.
TEST_CASE("census equals brute-force module enumeration at degree 1") {
    for (int q : {2, 3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        for (int x = 0; x < q; ++x) {
            PolyA prime(F, {F.neg(x), 1});  // T - x
            std::map<std::pair<int, int>, int> tally;
            for (int alpha = 0; alpha < q; ++alpha)
                for (int beta = 1; beta < q; ++beta) {
                    int binv = F.inv(beta);
                    int a = F.neg(F.mul(binv, alpha));
                    int b = F.neg(binv);
                    tally[{a, b}] += 1;
                }
            REQUIRE(tally.size() == static_cast<size_t>(q * (q - 1)));

            const Census& C = census(F, prime, 1);
            REQUIRE(C.rows.size() == tally.size());
            for (const auto& [key, count] : tally) {
                PolyA a_poly = PolyA::constant(F, key.first);
                int found = census_lookup(C, a_poly, key.second);
                CHECK(found == count % F.p);
            }
        }
    }
}

TEST_CASE("isogeny sums vanish") {
    for (int q : {2, 3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        std::vector<std::pair<PolyA, int>> shapes;
        for (const PolyA& pr : monic_irreducibles(F, 1))
            for (int n = 1; n <= 4; ++n) shapes.emplace_back(pr, n);
        shapes.emplace_back(monic_irreducibles(F, 2).front(), 1);
        shapes.emplace_back(monic_irreducibles(F, 2).front(), 2);
        shapes.emplace_back(monic_irreducibles(F, 3).front(), 1);
        shapes.emplace_back(monic_irreducibles(F, 4).front(), 1);

        for (const auto& [prime, n] : shapes) {
            const Census& C = census(F, prime, n);
            for (int t = 0; t <= q - 2; ++t) {
                int acc = 0;
                for (const IsoCount& row : C.rows)
                    acc = F.add(acc, F.mul(row.count % F.p, F.pow(row.cls.b, t)));
                CHECK(acc == 0);
            }
        }
    }
}

TEST_CASE("scaling symmetry of iso counts") {
    for (int q : {3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        for (auto [dp, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {1, 3}}) {
            PolyA prime = monic_irreducibles(F, dp).front();
            const Census& C = census(F, prime, n);
            for (const IsoCount& row : C.rows)
                for (int c = 1; c < q; ++c) {
                    PolyA ca = row.cls.a.scaled(c);
                    int cb = F.mul(F.mul(c, c), row.cls.b);
                    CHECK(census_lookup(C, ca, cb) == row.count);
                }
        }
    }
}

TEST_CASE("case structure of the census") {
    for (int q : {2, 3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        for (auto [dp, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {1, 4}, {3, 1}}) {
            PolyA prime = monic_irreducibles(F, dp).front();
            long long nd = static_cast<long long>(n) * dp;
            const Census& C = census(F, prime, n);
            long long qd = 1;
            for (int i = 0; i < dp; ++i) qd *= q;
            for (const IsoCount& row : C.rows) {
                switch (row.cls.case_tag) {
                    case 1:
                        CHECK(!row.cls.a.is_zero());
                        CHECK(!(row.cls.a % prime).is_zero());
                        CHECK(2 * row.cls.a.deg_int() <= nd);
                        break;
                    case 2:
                        CHECK(n % 2 == 1);
                        CHECK(row.cls.a.is_zero());
                        break;
                    case 3:
                        CHECK(n % 2 == 0);
                        CHECK(dp % 2 == 1);
                        CHECK(row.count == 2 % F.p);
                        break;
                    case 4:
                        CHECK(n % 2 == 0);
                        CHECK(row.count == ((qd - 1) / (q - 1)) % F.p);
                        break;
                    default:
                        FAIL("unexpected case tag");
                }
            }
            // ordering: case, then degree of a, then lex, then b
            for (size_t i = 1; i < C.rows.size(); ++i) {
                const WeilClass& u = C.rows[i - 1].cls;
                const WeilClass& v = C.rows[i].cls;
                if (u.case_tag != v.case_tag) {
                    CHECK(u.case_tag < v.case_tag);
                } else if (u.a != v.a) {
                    CHECK(poly_lex_less(u.a, v.a));
                } else {
                    CHECK(u.b < v.b);
                }
            }
        }
    }
}

TEST_CASE("imaginary discriminants for ordinary classes") {
    for (int q : {3, 5}) {
        const FieldDesc& F = field_create(q, 1);
        for (auto [dp, n] : {std::pair{1, 1}, {1, 2}, {2, 1}}) {
            PolyA prime = monic_irreducibles(F, dp).front();
            PolyA pn = pow_poly(prime, n);
            for (const IsoCount& row : census(F, prime, n).rows) {
                if (row.cls.case_tag != 1 && row.cls.case_tag != 2) continue;
                PolyA disc = row.cls.a * row.cls.a - pn.scaled(F.mul(F.from_int(4), row.cls.b));
                auto [D, g] = squarefree_part(disc);
                // imaginary: the infinite place does not split in K(sqrt(disc))
                bool odd_deg = D.deg_int() % 2 == 1;
                bool nonsquare_lc = !F.is_square(D.lc());
                CHECK((odd_deg || nonsquare_lc));
            }
        }
    }
}

TEST_CASE("hyperelliptic model and point counts, hand-checked") {
    const FieldDesc& F = field_create(3, 1);
    PolyA t = PolyA::var(F);

    // class (a, b) = (T+1, 1) for prime T, n = 3:
    // disc = (T+1)^2 - 4T^3 = 2(T+2)(T^2+1), squarefree of degree 3
    HyperellipticModel M = build_model(F, -parse_poly(F, "T+1"), pow_poly(t, 3));
    REQUIRE(M.separable);
    REQUIRE(!M.degenerate);
    CHECK(M.genus == 1);

    // the odd-q model presents Y^2 + s = 0, so the curve is Y^2 = D with D = -s
    PolyA D = -M.s;
    for (int j = 1; j <= 2; ++j) {
        const FieldDesc& E = extension_field(F, j);
        long long pts = 0;
        for (int x = 0; x < E.q; ++x) {
            int v = eval_in(D, E, x);
            pts += v == 0 ? 1 : (E.is_square(v) ? 2 : 0);
        }
        if (D.deg_int() % 2 == 1)
            pts += 1;  // odd degree ramifies at infinity
        else
            pts += E.is_square(eval_in(PolyA::constant(F, D.lc()), E, 0)) ? 2 : 0;
        CHECK(curve_point_count(M, j) == pts);
    }
    CHECK(jacobian_order(M) == curve_point_count(M, 1));  // genus 1

    // imaginary test on explicit quadratics
    PolyA t1 = PolyA::constant(F, 1);
    PolyAX xx = PolyAX::monomial(F, 2, t1);
    CHECK(is_imaginary(xx - PolyAX::constant(F, t)).first);  // X^2 - T
    PolyAX split = (PolyAX::monomial(F, 1, t1) - PolyAX::constant(F, t)) *
                   (PolyAX::monomial(F, 1, t1) - PolyAX::constant(F, t + t1));
    CHECK(!is_imaginary(split).first);  // (X-T)(X-T-1) splits
}

TEST_CASE("census cache returns a stable reference") {
    const FieldDesc& F = field_create(3, 1);
    PolyA t = PolyA::var(F);
    const Census& a = census(F, t, 1);
    const Census& b = census(F, t, 1);
    CHECK(&a == &b);
    CHECK(a.rows.size() == 6);
}

TEST_CASE("census csv format") {
    const FieldDesc& F = field_create(3, 1);
    const Census& C = census(F, PolyA::var(F), 1);
    CHECK(census_csv(C) ==
          "a,b,case,count_mod_p\n"
          "1,1,1,1\n"
          "1,2,1,1\n"
          "2,1,1,1\n"
          "2,2,1,1\n"
          "0,1,2,1\n"
          "0,2,2,1\n");
}

TEST_CASE("validation errors") {
    const FieldDesc& F = field_create(3, 1);
    CHECK_THROWS_AS(census(F, parse_poly(F, "T^2"), 1), NotIrreducible);
    CHECK_THROWS_AS(census(F, parse_poly(F, "2*T"), 1), NotMonic);
}
