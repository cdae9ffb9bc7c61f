#include "catch_amalgamated.hpp"

#include <vector>

#include "dmf/combinat.hpp"
#include "dmf/gf.hpp"
#include "dmf/poly.hpp"
#include "dmf/traces.hpp"

using namespace dmf;

// A full table for a degree five prime: large enough that an algorithmic
// regression (in the census, the class number routine or the recurrence
// sweep) blows straight through the ctest timeout.
TEST_CASE("degree five prime full table up to weight 200") {
    const FieldDesc& F = field_create(3, 1);
    PolyA wp = parse_poly(F, "T^5+2*T+1");

    std::vector<long long> weights;
    for (long long k = 2; k <= 200; ++k) weights.push_back(k);
    std::vector<PolyA> tr = trace_table(F, wp, 1, 0, weights);
    REQUIRE(tr.size() == weights.size());

    // spot value: weight 12, type 0 is the cube of the prime
    CHECK(tr[10] == pow_poly(wp, 3));

    for (size_t i = 0; i < tr.size(); ++i) {
        long long k = weights[i];
        if (!type_compatible(3, k, 0)) {
            CHECK(tr[i].is_zero());
            continue;
        }
        // strict slope bound 2 deg < n d (k - 2)
        if (!tr[i].is_zero()) CHECK(2 * tr[i].deg_int() < 5 * (k - 2));
    }

    // Frobenius twist: the trace at weight 3k+2 is the cube of the trace at
    // weight k+2 modulo the prime
    for (long long k = 1; 3 * k + 2 <= 200; ++k) {
        const PolyA& low = tr[static_cast<size_t>(k)];
        const PolyA& high = tr[static_cast<size_t>(3 * k)];
        PolyA diff = high - pow_poly(low, 3);
        CHECK((diff % wp).is_zero());
    }
}
