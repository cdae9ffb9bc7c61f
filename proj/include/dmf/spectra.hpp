#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "isogeny.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "traces.hpp"

namespace dmf {

// Monic degree-d characteristic polynomial from the power sums p_1..p_d via
// Newton's identities; requires d < p so that 1..d are invertible mod p.
inline PolyAX charpoly_from_traces(const FieldDesc& F, const std::vector<PolyA>& traces,
                                   long long d) {
    if (d < 0) throw error("negative dimension");
    if (d >= F.p)
        throw DimensionAtLeastP("Newton identities need dim < p; try berlekamp_massey");
    if (static_cast<long long>(traces.size()) < d)
        throw InsufficientTerms("need at least d trace terms");
    std::vector<PolyA> e(static_cast<size_t>(d) + 1, PolyA::zero(F));
    e[0] = PolyA::constant(F, 1);
    for (long long i = 1; i <= d; ++i) {
        PolyA acc = PolyA::zero(F);
        for (long long j = 1; j <= i; ++j) {
            PolyA term = e[static_cast<size_t>(i - j)] * traces[static_cast<size_t>(j - 1)];
            acc = (j % 2 == 1) ? acc + term : acc - term;
        }
        e[static_cast<size_t>(i)] = acc.scaled(F.inv(F.from_int(static_cast<int>(i % F.p))));
    }
    std::vector<PolyA> cs(static_cast<size_t>(d) + 1, PolyA::zero(F));
    for (long long i = 0; i <= d; ++i) {
        PolyA v = e[static_cast<size_t>(i)];
        if (i % 2 == 1) v = -v;
        cs[static_cast<size_t>(d - i)] = std::move(v);
    }
    return PolyAX(F, std::move(cs));
}

struct BMResult {
    PolyAX minpoly;  // monic in X, coefficients cleared into A
    long long length = 0;
};

// Minimal linear recurrence of the sequence over K (Berlekamp-Massey); the
// roots of the returned polynomial are the eigenvalues whose multiplicity is
// nonzero mod p.  Pass the expected dimension: 2d terms are required for the
// minimality guarantee.
inline BMResult berlekamp_massey(const FieldDesc& F, const std::vector<PolyA>& seq,
                                 long long d) {
    if (static_cast<long long>(seq.size()) < 2 * d)
        throw InsufficientTerms("berlekamp_massey needs at least 2d terms");
    size_t n = seq.size();
    std::vector<RationalFn> s;
    s.reserve(n);
    for (const PolyA& x : seq) s.emplace_back(x);

    std::vector<RationalFn> C{RationalFn::one(F)}, B{RationalFn::one(F)};
    long long L = 0, m = 1;
    RationalFn b = RationalFn::one(F);
    for (size_t i = 0; i < n; ++i) {
        RationalFn delta = s[i];
        for (long long j = 1; j <= L; ++j)
            delta = delta + C[static_cast<size_t>(j)] * s[i - static_cast<size_t>(j)];
        if (delta.is_zero()) {
            ++m;
            continue;
        }
        RationalFn coef = delta / b;
        if (2 * L <= static_cast<long long>(i)) {
            std::vector<RationalFn> T = C;
            if (C.size() < B.size() + static_cast<size_t>(m))
                C.resize(B.size() + static_cast<size_t>(m), RationalFn::zero(F));
            for (size_t j = 0; j < B.size(); ++j)
                C[j + static_cast<size_t>(m)] = C[j + static_cast<size_t>(m)] - coef * B[j];
            L = static_cast<long long>(i) + 1 - L;
            B = std::move(T);
            b = delta;
            m = 1;
        } else {
            if (C.size() < B.size() + static_cast<size_t>(m))
                C.resize(B.size() + static_cast<size_t>(m), RationalFn::zero(F));
            for (size_t j = 0; j < B.size(); ++j)
                C[j + static_cast<size_t>(m)] = C[j + static_cast<size_t>(m)] - coef * B[j];
            ++m;
        }
    }

    // sanity: the connection polynomial annihilates the whole window
    for (size_t i = static_cast<size_t>(L); i < n; ++i) {
        RationalFn check = s[i];
        for (long long j = 1; j <= L; ++j)
            check = check + C[static_cast<size_t>(j)] * s[i - static_cast<size_t>(j)];
        if (!check.is_zero()) throw error("berlekamp_massey internal check failed");
    }

    // minpoly(X) = X^L + c_1 X^{L-1} + ... + c_L; eigenvalues are integral,
    // so non-integral coefficients signal a bug
    std::vector<PolyA> cs(static_cast<size_t>(L) + 1, PolyA::zero(F));
    cs[static_cast<size_t>(L)] = PolyA::constant(F, 1);
    for (long long j = 1; j <= L; ++j) {
        RationalFn cj = j < static_cast<long long>(C.size()) ? C[static_cast<size_t>(j)]
                                                             : RationalFn::zero(F);
        if (!cj.is_integral())
            throw error("minimal recurrence has a non-integral coefficient: " + cj.str());
        cs[static_cast<size_t>(L - j)] = cj.num;
    }
    return {PolyAX(F, std::move(cs)), L};
}

// Fraction-free determinant of a square matrix over A (Bareiss).
inline PolyA bareiss_det(const FieldDesc& F, std::vector<std::vector<PolyA>> M) {
    size_t d = M.size();
    if (d == 0) return PolyA::constant(F, 1);
    for (const auto& row : M)
        if (row.size() != d) throw error("bareiss_det needs a square matrix");
    int sign = 1;
    PolyA prev = PolyA::constant(F, 1);
    for (size_t k = 0; k + 1 < d; ++k) {
        if (M[k][k].is_zero()) {
            size_t swap_row = k;
            for (size_t i = k + 1; i < d; ++i)
                if (!M[i][k].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row == k) return PolyA::zero(F);  // column below pivot all zero
            std::swap(M[k], M[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < d; ++i)
            for (size_t j = k + 1; j < d; ++j)
                M[i][j] = exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
        prev = M[k][k];
    }
    PolyA det = M[d - 1][d - 1];
    if (sign < 0) det = -det;
    return det;
}

struct RepeatedEigResult {
    PolyA hankel_det;
    bool repeated = false;
    std::string evidence;
};

// Hankel-determinant test on the sequence s_0 = dim mod p, s_1.. = traces of
// powers.  det = 0 exactly when some eigenvalue is repeated.
inline RepeatedEigResult repeated_eig_detect(const FieldDesc& F, const std::vector<PolyA>& s,
                                             long long d) {
    if (d < 0) throw error("negative dimension");
    if (d == 0) return {PolyA::constant(F, 1), false, "empty matrix"};
    if (static_cast<long long>(s.size()) < 2 * d - 1)
        throw InsufficientTerms("need s_0..s_{2d-2}");
    std::vector<std::vector<PolyA>> M(static_cast<size_t>(d),
                                      std::vector<PolyA>(static_cast<size_t>(d)));
    for (long long i = 0; i < d; ++i)
        for (long long j = 0; j < d; ++j)
            M[static_cast<size_t>(i)][static_cast<size_t>(j)] = s[static_cast<size_t>(i + j)];
    PolyA det = bareiss_det(F, std::move(M));
    return {det, det.is_zero(), "bareiss"};
}

// Odd-multiplicity eigenvalue list in even characteristic: prime^j over the
// index set of (k, l).
inline std::vector<PolyA> char2_odd_mult_eigs(const FieldDesc& F, const PolyA& prime,
                                              long long k, long long l) {
    if (F.p != 2) throw OddCharacteristic("char2_odd_mult_eigs needs even characteristic");
    std::vector<PolyA> out;
    for (long long j : char2_index_set(F.q, k, l)) out.push_back(pow_poly(prime, j));
    return out;
}

// Repeated-eigenvalue verdict in even characteristic.  The trace sequence
// here is a sum of geometric sequences prime^{jm} over the index set of
// (k, l), so the d x d Hankel matrix factors through an N x d Vandermonde
// matrix on the N values prime^j: N < d forces determinant zero, and N = d
// gives the squared Vandermonde product.  The factorization is checked
// against the actual traces at m = 1, 2 (distinct index sets already differ
// there, the exponent sums being distinct monomial patterns in the prime),
// and the top-left entry dim mod 2 must match N mod 2; on any mismatch we
// fall back to the plain Bareiss determinant.
inline RepeatedEigResult repeated_eig_char2(const FieldDesc& F, const PolyA& prime,
                                            long long k, long long l) {
    if (F.p != 2) throw OddCharacteristic("repeated_eig_char2 needs even characteristic");
    long long d = dim_cusp(F.q, k, l);
    if (d == 0) return {PolyA::constant(F, 1), false, "empty matrix"};
    std::vector<long long> P = char2_index_set(F.q, k, l);
    long long N = static_cast<long long>(P.size());

    auto power_sum = [&](long long m) {
        PolyA acc = PolyA::zero(F);
        for (long long j : P) acc = acc + pow_poly(prime, j * m);
        return acc;
    };
    bool structural = (N <= d) && (d - N) % 2 == 0;
    for (long long m = 1; structural && m <= std::min<long long>(2, 2 * d - 2); ++m) {
        PolyA tr = trace_char2({&F, prime, static_cast<int>(m), k, l});
        if (!(tr == power_sum(m))) structural = false;
    }
    if (!structural) {
        std::vector<PolyA> s;
        s.push_back(PolyA::constant(F, F.from_int(static_cast<int>(d % F.p))));
        for (long long m = 1; m <= 2 * d - 2; ++m)
            s.push_back(trace_char2({&F, prime, static_cast<int>(m), k, l}));
        return repeated_eig_detect(F, s, d);
    }
    if (N < d) return {PolyA::zero(F), true, "hankel rank at most " + std::to_string(N)};
    PolyA det = PolyA::constant(F, 1);
    for (size_t t = 0; t < P.size(); ++t)
        for (size_t u = t + 1; u < P.size(); ++u) {
            PolyA diff = pow_poly(prime, P[u]) - pow_poly(prime, P[t]);
            det = det * diff * diff;
        }
    return {det, false, "vandermonde product"};
}

// ---------------------------------------------------------------------------
// Newton polygons

enum class Valuation { infinity, at_prime };

struct NPSegment {
    long long slope_num = 0, slope_den = 1;  // lower-hull slope, reduced, den > 0
    long long w_num = 0, w_den = 1;          // root valuation w = -slope
    long long length = 0;                    // projected (horizontal) length
};

struct NewtonPolygon {
    Valuation tag = Valuation::infinity;
    std::vector<std::pair<long long, long long>> vertices;  // hull points (i, v(c_i))
    std::vector<NPSegment> segments;                        // hull slopes nondecreasing
    long long zero_roots = 0;                               // X-adic order of the input
};

namespace detail {
inline void np_reduce(long long& num, long long& den) {
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}
}  // namespace detail

inline NewtonPolygon newton_polygon(const PolyAX& f, Valuation tag,
                                    const PolyA* prime = nullptr) {
    if (f.is_zero()) throw ZeroPolynomial("newton polygon of zero");
    if (tag == Valuation::at_prime && prime == nullptr)
        throw error("newton_polygon at a prime needs the prime");
    NewtonPolygon np;
    np.tag = tag;
    std::vector<std::pair<long long, long long>> pts;
    long long dg = f.deg_int();
    for (long long i = 0; i <= dg; ++i) {
        PolyA ci = f.coeff(i);
        if (ci.is_zero()) continue;  // infinite valuation: never on the hull
        if (pts.empty()) np.zero_roots = i;
        long long v = tag == Valuation::infinity ? -static_cast<long long>(ci.deg_int())
                                                 : ord_at(ci, *prime);
        pts.emplace_back(i, v);
    }
    // lower hull, merging equal slopes
    for (const auto& pt : pts) {
        while (np.vertices.size() >= 2) {
            const auto& a = np.vertices[np.vertices.size() - 2];
            const auto& b = np.vertices[np.vertices.size() - 1];
            // pop b unless slope(a,b) < slope(b,pt)
            if ((b.second - a.second) * (pt.first - b.first) <
                (pt.second - b.second) * (b.first - a.first))
                break;
            np.vertices.pop_back();
        }
        np.vertices.push_back(pt);
    }
    for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
        NPSegment seg;
        seg.length = np.vertices[i + 1].first - np.vertices[i].first;
        seg.slope_num = np.vertices[i + 1].second - np.vertices[i].second;
        seg.slope_den = seg.length;
        detail::np_reduce(seg.slope_num, seg.slope_den);
        seg.w_num = -seg.slope_num;
        seg.w_den = seg.slope_den;
        np.segments.push_back(seg);
    }
    return np;
}

// ---------------------------------------------------------------------------
// Roots in A

// Quotient and remainder of f by (X - r): returns (g, f(r)) with
// f = (X - r) g + f(r).
inline std::pair<PolyAX, PolyA> divrem_linear(const PolyAX& f, const PolyA& r) {
    const FieldDesc& F = *f.F;
    if (f.is_zero()) return {PolyAX::zero(F), PolyA::zero(F)};
    long long dg = f.deg_int();
    std::vector<PolyA> g(static_cast<size_t>(std::max<long long>(dg, 1)), PolyA::zero(F));
    PolyA carry = PolyA::zero(F);
    for (long long i = dg; i >= 1; --i) {
        carry = f.coeff(i) + carry * r;
        g[static_cast<size_t>(i - 1)] = carry;
    }
    PolyA rem = f.coeff(0) + carry * r;
    return {PolyAX(F, std::move(g)), rem};
}

// All roots of f lying in A, with multiplicity, by testing unit multiples of
// the monic divisors of the constant term.  Intended for the small
// characteristic polynomials produced here; throws if the divisor count
// explodes.
inline std::vector<std::pair<PolyA, int>> poly_roots_in_A(const PolyAX& f_in,
                                                          long long divisor_cap = 100000) {
    if (f_in.is_zero()) throw ZeroPolynomial("roots of the zero polynomial");
    const FieldDesc& F = *f_in.F;
    PolyAX f = f_in;
    std::vector<std::pair<PolyA, int>> roots;
    int zero_mult = 0;
    while (!f.is_zero() && f.deg_int() >= 1 && f.coeff(0).is_zero()) {
        f = divrem_linear(f, PolyA::zero(F)).first;
        ++zero_mult;
    }
    if (zero_mult > 0) roots.emplace_back(PolyA::zero(F), zero_mult);
    if (f.deg_int() < 1) {
        return roots;
    }
    PolyA c0 = f.coeff(0);
    Factorization fac = factor_monic(c0);
    long long count = 1;
    for (const auto& [g, e] : fac.factors) {
        (void)g;
        count *= (e + 1);
        if (count > divisor_cap) throw error("too many divisor candidates for root search");
    }
    std::vector<PolyA> divisors{PolyA::constant(F, 1)};
    for (const auto& [g, e] : fac.factors) {
        std::vector<PolyA> next;
        PolyA pw = PolyA::constant(F, 1);
        for (int i = 0; i <= e; ++i) {
            for (const PolyA& dvs : divisors) next.push_back(dvs * pw);
            if (i < e) pw = pw * g;
        }
        divisors = std::move(next);
    }
    for (const PolyA& dvs : divisors) {
        for (int u = 1; u < F.q; ++u) {
            PolyA cand = dvs.scaled(u);
            int mult = 0;
            while (true) {
                auto [g, rem] = divrem_linear(f, cand);
                if (!rem.is_zero()) break;
                f = std::move(g);
                ++mult;
                if (f.deg_int() < 1) break;
            }
            if (mult > 0) roots.emplace_back(cand, mult);
            if (f.deg_int() < 1) break;
        }
        if (f.deg_int() < 1) break;
    }
    std::sort(roots.begin(), roots.end(),
              [](const auto& a, const auto& b) { return poly_lex_less(a.first, b.first); });
    return roots;
}

// ---------------------------------------------------------------------------
// Oldform/newform criterion

struct OldNewVerdict {
    bool half_power_exists = false;  // k even, so prime^{(k-2)/2} is in A
    bool plus_root = false;
    bool minus_root = false;
    bool decomposition_holds = true;  // no +-prime^{(k-2)/2} eigenvalue found
};

inline OldNewVerdict oldnew_criterion(const PolyAX& charpoly, const PolyA& prime, long long k) {
    OldNewVerdict v;
    if (k < 2 || k % 2 != 0) return v;  // exponent not integral: nothing to find
    v.half_power_exists = true;
    PolyA w = pow_poly(prime, (k - 2) / 2);
    v.plus_root = charpoly.eval(w).is_zero();
    v.minus_root = charpoly.eval(-w).is_zero();
    v.decomposition_holds = !(v.plus_root || v.minus_root);
    return v;
}

// ---------------------------------------------------------------------------
// Census moment sums

// Sum over the census of count * b^t * prod_i a_i^{v_i} (with 0^0 = 1), as an
// element of F_q.
inline int census_moment(const FieldDesc& F, const Census& C, int t,
                         const std::vector<int>& v) {
    int acc = 0;
    for (const IsoCount& row : C.rows) {
        int term = F.mul(F.from_int(row.count), F.pow(row.cls.b, t));
        for (size_t i = 0; i < v.size() && term != 0; ++i) {
            if (v[i] == 0) continue;
            int ai = row.cls.a.coeff(static_cast<long long>(i));
            term = F.mul(term, F.pow(ai, v[i]));
        }
        acc = F.add(acc, term);
    }
    return acc;
}

struct MomentViolation {
    std::vector<int> v;
    int t = 0;
    int value = 0;
};

struct RamSuffReport {
    long long tuples_checked = 0;
    std::vector<MomentViolation> violations;
};

// Exhaustive check of the sufficient condition for the strong Ramanujan
// bound at prime^n: every census moment with 0 <= v_i <= q-1,
// 2 sum(i v_i) > nd(sum(v_i) - (q-1)) and 2t = -sum(v_i) mod q-1 must vanish.
inline RamSuffReport ram_suff_check(const FieldDesc& F, const PolyA& prime, int n,
                                    const TraceOptions& opts = {}) {
    int d = prime.deg_int();
    if (static_cast<long long>(n) * d > opts.cap)
        throw CapExceeded("n*deg(prime) exceeds cap " + std::to_string(opts.cap));
    const Census& C = census(F, prime, n);
    int nd = n * d;
    int N = nd / 2;
    RamSuffReport rep;
    std::vector<int> v(static_cast<size_t>(N) + 1, 0);
    while (true) {
        long long k = std::accumulate(v.begin(), v.end(), 0LL);
        long long wsum = 0;
        for (size_t i = 0; i < v.size(); ++i) wsum += static_cast<long long>(i) * v[i];
        if (2 * wsum > static_cast<long long>(nd) * (k - (F.q - 1))) {
            for (int t = 1; t <= F.q - 1; ++t) {
                if (((2 * t + k) % (F.q - 1) + (F.q - 1)) % (F.q - 1) != 0) continue;
                ++rep.tuples_checked;
                int val = census_moment(F, C, t, v);
                if (val != 0) rep.violations.push_back({v, t, val});
            }
        }
        // odometer over tuples
        size_t pos = 0;
        while (pos < v.size() && v[pos] == F.q - 1) v[pos++] = 0;
        if (pos == v.size()) break;
        ++v[pos];
    }
    return rep;
}

// The leading-coefficient moments: sum over deg(a) = nd/2 of
// count * (lc a)^m * b^t, which vanish for 1 <= m <= q-1 and every t.
inline std::vector<MomentViolation> sum0_check(const FieldDesc& F, const PolyA& prime, int n,
                                               const TraceOptions& opts = {}) {
    int d = prime.deg_int();
    if (static_cast<long long>(n) * d > opts.cap)
        throw CapExceeded("n*deg(prime) exceeds cap " + std::to_string(opts.cap));
    const Census& C = census(F, prime, n);
    int half = (n * d) / 2;
    bool half_exact = (n * d) % 2 == 0;
    std::vector<MomentViolation> out;
    for (int m = 1; m <= F.q - 1; ++m)
        for (int t = 0; t <= F.q - 2; ++t) {
            int acc = 0;
            if (half_exact) {
                for (const IsoCount& row : C.rows) {
                    if (row.cls.a.is_zero() || row.cls.a.deg_int() != half) continue;
                    int term = F.mul(F.from_int(row.count), F.pow(row.cls.b, t));
                    term = F.mul(term, F.pow(row.cls.a.lc(), m));
                    acc = F.add(acc, term);
                }
            }
            if (acc != 0) out.push_back({{m}, t, acc});
        }
    return out;
}

// ---------------------------------------------------------------------------
// Spectrum driver

struct SpectrumOptions {
    int cap = 6;
    int jobs = 1;
    bool extract_roots = true;
};

struct SpectrumReport {
    int q = 0;
    PolyA prime;
    long long k = 0, l = 0;
    long long dim = 0;
    std::vector<PolyA> traces;              // Tr of powers 1..NT
    std::optional<PolyAX> charpoly;         // full degree-dim polynomial
    std::optional<PolyAX> visible_minpoly;  // BM output when used
    std::string method;                     // "newton" | "berlekamp_massey" | "none"
    long long bm_length = -1;
    PolyA hankel_det;
    bool repeated = false;
    std::string repeated_evidence;
    std::vector<NPSegment> slopes_inf;
    std::vector<NPSegment> slopes_prime;
    bool slopes_partial = false;  // computed from the visible part only
    std::vector<PolyA> odd_mult_eigs;
    std::vector<std::pair<PolyA, int>> integral_roots;
    OldNewVerdict oldnew;
};

inline SpectrumReport spectrum(const FieldDesc& F, const PolyA& prime, long long k, long long l,
                               const SpectrumOptions& opts = {}) {
    TraceQuery probe{&F, prime, 1, std::max<long long>(k, 2), l};
    detail::validate_trace_query(probe);
    if (k < 2) throw error("weight must be at least 2");
    SpectrumReport rep;
    rep.q = F.q;
    rep.prime = prime;
    rep.k = k;
    rep.l = l;
    rep.dim = dim_cusp(F.q, k, l);
    rep.hankel_det = PolyA::constant(F, 1);
    long long d = rep.dim;
    if (d == 0) {
        rep.method = "none";
        rep.charpoly = PolyAX::constant(F, PolyA::constant(F, 1));
        return rep;
    }

    TraceOptions topts{opts.cap, opts.jobs};
    int dp = prime.deg_int();
    bool newton_path = d < F.p;
    if (!newton_path && F.p != 2 && 2 * d * dp > opts.cap)
        throw DimensionAtLeastP("dim " + std::to_string(d) + " >= p and 2*dim*deg(prime) = " +
                                std::to_string(2 * d * dp) + " exceeds cap " +
                                std::to_string(opts.cap));
    long long NT = newton_path ? std::max(d, 2 * d - 2) : 2 * d;
    for (long long n = 1; n <= NT; ++n)
        rep.traces.push_back(trace_auto({&F, prime, static_cast<int>(n), k, l}, topts).value);

    if (newton_path) {
        rep.charpoly = charpoly_from_traces(F, rep.traces, d);
        rep.method = "newton";
    } else {
        BMResult bm = berlekamp_massey(F, rep.traces, d);
        rep.visible_minpoly = bm.minpoly;
        rep.bm_length = bm.length;
        rep.method = "berlekamp_massey";
        if (bm.length == d) rep.charpoly = bm.minpoly;
    }

    if (F.p == 2) {
        RepeatedEigResult re = repeated_eig_char2(F, prime, k, l);
        rep.hankel_det = re.hankel_det;
        rep.repeated = re.repeated;
        rep.repeated_evidence = re.evidence;
        if (type_compatible(F.q, k, l)) rep.odd_mult_eigs = char2_odd_mult_eigs(F, prime, k, l);
    } else {
        std::vector<PolyA> s;
        s.push_back(PolyA::constant(F, F.from_int(static_cast<int>(d % F.p))));
        for (long long m = 1; m <= 2 * d - 2; ++m) s.push_back(rep.traces[static_cast<size_t>(m - 1)]);
        RepeatedEigResult re = repeated_eig_detect(F, s, d);
        rep.hankel_det = re.hankel_det;
        rep.repeated = re.repeated;
        rep.repeated_evidence = re.evidence;
    }

    const PolyAX* slope_src = nullptr;
    if (rep.charpoly) {
        slope_src = &*rep.charpoly;
    } else if (rep.visible_minpoly) {
        slope_src = &*rep.visible_minpoly;
        rep.slopes_partial = true;
    }
    if (slope_src != nullptr && !slope_src->is_zero() && slope_src->deg_int() >= 1) {
        rep.slopes_inf = newton_polygon(*slope_src, Valuation::infinity).segments;
        rep.slopes_prime = newton_polygon(*slope_src, Valuation::at_prime, &prime).segments;
        if (opts.extract_roots) {
            try {
                rep.integral_roots = poly_roots_in_A(*slope_src);
            } catch (const error&) {
                // root search can bail out on large constant terms; leave empty
            }
        }
        rep.oldnew = oldnew_criterion(*slope_src, prime, k);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Scans and figure data

struct FigureRow {
    long long k = 0;
    bool zero_trace = false;
    long long deg = 0;      // valid when !zero_trace
    long long bound2 = 0;   // 2 * strong bound = n*d*(k-(q+1))
    double log_distance = 0.0;
};

// Degrees of Tr against the strong bound n*d*(k-(q+1))/2 over a weight range;
// rows only for weights of matching type with dim >= 1.
inline std::vector<FigureRow> figure_data(const FieldDesc& F, const PolyA& prime, int n,
                                          long long l, long long k_from, long long k_to,
                                          const TraceOptions& opts = {}) {
    TraceQuery probe{&F, prime, n, 2, l};
    detail::validate_trace_query(probe);
    int d = prime.deg_int();
    std::vector<long long> ks;
    for (long long k = std::max<long long>(k_from, 2); k <= k_to; ++k)
        if (type_compatible(F.q, k, l) && dim_cusp(F.q, k, l) >= 1) ks.push_back(k);

    std::vector<PolyA> vals;
    vals.reserve(ks.size());
    if (F.p == 2) {
        for (long long k : ks) vals.push_back(trace_char2({&F, prime, n, k, l}));
    } else if (d == 1 && n == 1) {
        for (long long k : ks) vals.push_back(trace_deg1({&F, prime, n, k, l}));
    } else if (n * d == 2) {
        for (long long k : ks) vals.push_back(trace_deg2({&F, prime, n, k, l}));
    } else {
        vals = trace_table(F, prime, n, l, ks, opts);
    }

    std::vector<FigureRow> rows;
    for (size_t i = 0; i < ks.size(); ++i) {
        FigureRow row;
        row.k = ks[i];
        row.bound2 = static_cast<long long>(n) * d * (ks[i] - (F.q + 1));
        if (vals[i].is_zero()) {
            row.zero_trace = true;
        } else {
            row.deg = vals[i].deg_int();
            double dist = static_cast<double>(row.bound2 - 2 * row.deg) / 2.0;
            row.log_distance = std::log(1.0 + dist) / std::log(static_cast<double>(F.q));
        }
        rows.push_back(row);
    }
    return rows;
}

// Conjectured attainment weights k_n = (n-1)q^2 + (2l-n)q + 1 and the
// multiplicity d_l(n) = n - 2*ceil((n-l)/(q+1)).
inline long long attainment_weight(int q, long long l, long long n) {
    return (n - 1) * q * q + (2 * l - n) * q + 1;
}

inline long long attainment_mult(int q, long long l, long long n) {
    long long num = n - l;
    long long c = num >= 0 ? (num + q) / (q + 1) : -((-num) / (q + 1));
    return n - 2 * c;
}

struct AttainmentRow {
    long long k = 0;
    long long dim = 0;
    bool skipped = false;  // spectrum not computable under the cap
    std::string note;
    bool attained = false;
    long long mult = 0;                  // multiplicity of the extremal slope
    std::vector<NPSegment> slopes_inf;   // for residue reporting
};

struct AttainmentReport {
    std::vector<AttainmentRow> rows;
    std::vector<long long> predicted;  // k_n within range, excluding (n,l) = (2,1)
};

// Slope-attainment scan: for each weight of the right type, compare the
// extremal infinity-adic slope with the strong bound.  Report only; nothing
// here asserts the conjecture.
inline AttainmentReport scan_attainment(const FieldDesc& F, const PolyA& prime, long long l,
                                        long long k_from, long long k_to,
                                        const SpectrumOptions& opts = {}) {
    AttainmentReport rep;
    int d = prime.deg_int();
    for (long long n = 1;; ++n) {
        long long kn = attainment_weight(F.q, l, n);
        if (kn > k_to) break;
        if (kn >= k_from && !(n == 2 && normalize_type(F.q, l) == 1)) rep.predicted.push_back(kn);
    }
    for (long long k = std::max<long long>(k_from, 2); k <= k_to; ++k) {
        if (!type_compatible(F.q, k, l)) continue;
        long long dim = dim_cusp(F.q, k, l);
        if (dim == 0) continue;
        AttainmentRow row;
        row.k = k;
        row.dim = dim;
        try {
            SpectrumReport sp = spectrum(F, prime, k, l, opts);
            row.slopes_inf = sp.slopes_inf;
            row.attained = false;
            // extremal slope w = -d(k-(q+1))/2
            long long target2 = -static_cast<long long>(d) * (k - (F.q + 1));
            for (const NPSegment& seg : sp.slopes_inf) {
                if (2 * seg.w_num == target2 * seg.w_den) {
                    row.attained = true;
                    row.mult = seg.length;
                }
            }
            if (sp.slopes_partial) row.note = "visible spectrum only";
        } catch (const DimensionAtLeastP& e) {
            row.skipped = true;
            row.note = e.what();
        } catch (const CapExceeded& e) {
            row.skipped = true;
            row.note = e.what();
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace dmf
