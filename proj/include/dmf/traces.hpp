#pragma once

#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "isogeny.hpp"
#include "poly.hpp"

namespace dmf {

// A trace request: the trace of the n-th power of the (rescaled) Hecke
// operator at the given prime, acting on weight-k type-l cusp forms.
struct TraceQuery {
    const FieldDesc* F = nullptr;
    PolyA prime;
    int n = 1;
    long long k = 2;
    long long l = 1;
};

struct TraceOptions {
    int cap = 6;   // refuse census work with n*deg(prime) beyond this
    int jobs = 1;  // worker threads for census sums
};

struct TraceResult {
    PolyA value;
    std::string method;
};

// Weight/type compatibility: traces vanish unless k = 2l mod (q-1).
inline bool type_compatible(int q, long long k, long long l) {
    if (q == 2) return true;
    long long m = q - 1;
    return (((k - 2 * l) % m) + m) % m == 0;
}

namespace detail {

inline void validate_trace_query(const TraceQuery& qy) {
    if (qy.F == nullptr) throw error("trace query without field");
    if (!qy.prime.is_monic()) throw NotMonic("prime must be monic");
    if (!is_irreducible(qy.prime)) throw NotIrreducible("prime must be irreducible");
    if (qy.n < 1) throw error("power n must be at least 1");
    if (qy.k < 2) throw error("weight must be at least 2");
}

inline long long mod_pos(long long x, long long m) { return ((x % m) + m) % m; }

// Contribution of one isogeny class to Tr on S_{kk+2, l}: the class count
// times b^{l-kk-1} (h_kk - eps_kk) where h is the two-variable homogeneous
// recurrence in (a, b prime^n) and eps its even-index tail.
inline PolyA class_contribution(const FieldDesc& F, const IsoCount& row, const PolyA& bp,
                                long long kk, long long l) {
    if (kk == 0) return PolyA::zero(F);
    PolyA h0 = PolyA::constant(F, 1);
    PolyA h1 = row.cls.a;
    PolyA eps = PolyA::constant(F, 1);
    PolyA neg_bp = -bp;
    for (long long m = 2; m <= kk; ++m) {
        PolyA h2 = row.cls.a * h1 - bp * h0;
        h0 = std::move(h1);
        h1 = std::move(h2);
        if (m % 2 == 0) eps = eps * neg_bp;
    }
    PolyA inner = (kk % 2 == 0) ? h1 - eps : h1;
    int scalar = F.mul(F.from_int(row.count), F.pow(row.cls.b, mod_pos(l - kk - 1, F.q - 1)));
    return inner.scaled(scalar);
}

}  // namespace detail

// Trace via the class census; works for any prime and any n with
// n*deg(prime) under the cap.
inline PolyA trace_general(const TraceQuery& qy, const TraceOptions& opts = {}) {
    detail::validate_trace_query(qy);
    const FieldDesc& F = *qy.F;
    int d = qy.prime.deg_int();
    if (static_cast<long long>(qy.n) * d > opts.cap)
        throw CapExceeded("n*deg(prime) exceeds cap " + std::to_string(opts.cap));
    if (!type_compatible(F.q, qy.k, qy.l)) return PolyA::zero(F);
    long long kk = qy.k - 2;
    const Census& C = census(F, qy.prime, qy.n);
    PolyA bpark = pow_poly(qy.prime, qy.n);

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || C.rows.size() < 2) {
        PolyA total = PolyA::zero(F);
        for (const IsoCount& row : C.rows)
            total = total + detail::class_contribution(F, row, bpark.scaled(row.cls.b), kk, qy.l);
        return total;
    }
    std::vector<PolyA> partial(jobs, PolyA::zero(F));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w]() {
            PolyA acc = PolyA::zero(F);
            for (size_t i = w; i < C.rows.size(); i += jobs)
                acc = acc + detail::class_contribution(F, C.rows[i], bpark.scaled(C.rows[i].cls.b), kk, qy.l);
            partial[w] = std::move(acc);
        });
    }
    for (auto& t : workers) t.join();
    PolyA total = PolyA::zero(F);
    for (PolyA& part : partial) total = total + part;
    return total;
}

// Traces for a whole list of weights at fixed (prime, n, l), sharing one
// sweep of the recurrence per isogeny class.
inline std::vector<PolyA> trace_table(const FieldDesc& F, const PolyA& prime, int n, long long l,
                                      const std::vector<long long>& weights,
                                      const TraceOptions& opts = {}) {
    TraceQuery probe{&F, prime, n, 2, l};
    detail::validate_trace_query(probe);
    int d = prime.deg_int();
    if (static_cast<long long>(n) * d > opts.cap)
        throw CapExceeded("n*deg(prime) exceeds cap " + std::to_string(opts.cap));

    std::vector<PolyA> out(weights.size(), PolyA::zero(F));
    long long kmax = 2;
    std::vector<size_t> active;  // indices with the right type
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 2) throw error("weight must be at least 2");
        if (!type_compatible(F.q, weights[i], l)) continue;
        active.push_back(i);
        kmax = std::max(kmax, weights[i]);
    }
    if (active.empty()) return out;
    const Census& C = census(F, prime, n);
    PolyA bpark = pow_poly(prime, n);

    auto sweep = [&](size_t row_begin, size_t row_step, std::vector<PolyA>& acc) {
        for (size_t ri = row_begin; ri < C.rows.size(); ri += row_step) {
            const IsoCount& row = C.rows[ri];
            PolyA bp = bpark.scaled(row.cls.b);
            PolyA neg_bp = -bp;
            PolyA h0 = PolyA::constant(F, 1);
            PolyA h1 = row.cls.a;
            PolyA eps = PolyA::constant(F, 1);
            for (long long m = 0; m <= kmax - 2; ++m) {
                if (m >= 2) {
                    PolyA h2 = row.cls.a * h1 - bp * h0;
                    h0 = std::move(h1);
                    h1 = std::move(h2);
                    if (m % 2 == 0) eps = eps * neg_bp;
                }
                const PolyA& h = (m == 0) ? h0 : h1;
                for (size_t i : active) {
                    if (weights[i] - 2 != m || m == 0) continue;
                    PolyA inner = (m % 2 == 0) ? h - eps : h;
                    int scalar = F.mul(F.from_int(row.count),
                                       F.pow(row.cls.b, detail::mod_pos(l - m - 1, F.q - 1)));
                    acc[i] = acc[i] + inner.scaled(scalar);
                }
            }
        }
    };

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        sweep(0, 1, out);
        return out;
    }
    std::vector<std::vector<PolyA>> partial(jobs, std::vector<PolyA>(weights.size(), PolyA::zero(F)));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&, w]() { sweep(w, jobs, partial[w]); });
    for (auto& t : workers) t.join();
    for (int w = 0; w < jobs; ++w)
        for (size_t i = 0; i < weights.size(); ++i) out[i] = out[i] + partial[w][i];
    return out;
}

// Closed form for a prime of degree 1 and n = 1.
inline PolyA trace_deg1(const TraceQuery& qy) {
    detail::validate_trace_query(qy);
    const FieldDesc& F = *qy.F;
    if (qy.prime.deg_int() != 1 || qy.n != 1)
        throw WrongDegree("trace_deg1 needs a degree-1 prime and n = 1");
    if (!type_compatible(F.q, qy.k, qy.l)) return PolyA::zero(F);
    long long kk = qy.k - 2;
    long long step = F.q == 2 ? 1 : F.q - 1;
    long long j0 = detail::mod_pos(qy.l - 1, step);
    PolyA out = PolyA::zero(F);
    PolyA ppow = pow_poly(qy.prime, j0);
    PolyA pstep = pow_poly(qy.prime, step);
    for (long long j = j0; 2 * j < kk; j += step) {
        int cj = c_kj_mod_p(F.p, kk, j);
        if (cj != 0) out = out + ppow.scaled(F.from_int(cj));
        ppow = ppow * pstep;
    }
    return out;
}

// Closed form in even characteristic, valid for every prime and n.
inline PolyA trace_char2(const TraceQuery& qy) {
    detail::validate_trace_query(qy);
    const FieldDesc& F = *qy.F;
    if (F.p != 2) throw OddCharacteristic("trace_char2 needs even characteristic");
    if (!type_compatible(F.q, qy.k, qy.l)) return PolyA::zero(F);
    long long kk = qy.k - 2;
    long long step = F.q == 2 ? 1 : F.q - 1;
    long long j0 = detail::mod_pos(qy.l - 1, step);
    PolyA out = PolyA::zero(F);
    PolyA ppow = pow_poly(qy.prime, static_cast<long long>(qy.n) * j0);
    PolyA pstep = pow_poly(qy.prime, static_cast<long long>(qy.n) * step);
    for (long long j = j0; 2 * j < kk; j += step) {
        if (binom_mod_p(2, kk - j, j) == 1) out = out + ppow;
        ppow = ppow * pstep;
    }
    return out;
}

// Closed two-part form for n*deg(prime) = 2 in odd characteristic.
inline PolyA trace_deg2(const TraceQuery& qy) {
    detail::validate_trace_query(qy);
    const FieldDesc& F = *qy.F;
    if (F.p == 2) throw EvenCharacteristic("trace_deg2 needs odd characteristic");
    if (static_cast<long long>(qy.n) * qy.prime.deg_int() != 2)
        throw WrongDegree("trace_deg2 needs n*deg(prime) = 2");
    if (!type_compatible(F.q, qy.k, qy.l)) return PolyA::zero(F);
    long long kk = qy.k - 2;
    int q = F.q, p = F.p;
    long long step = q - 1;
    PolyA pn = pow_poly(qy.prime, qy.n);

    PolyA out = PolyA::zero(F);
    {
        long long j0 = detail::mod_pos(qy.l - 1, step);
        PolyA ppow = pow_poly(pn, j0);
        PolyA pstep = pow_poly(pn, step);
        for (long long j = j0; 2 * j < kk; j += step) {
            int cj = c_kj_mod_p(p, kk, j);
            if (cj != 0) out = out + ppow.scaled(F.from_int(cj));
            ppow = ppow * pstep;
        }
    }

    int inv4 = F.inv(F.from_int(4));
    int sign_half = ((q - 1) / 2) % 2;  // parity of (q-1)/2
    for (int m = (q - 1) / 2; m <= q - 2; ++m) {
        int outer = F.mul(F.pow(inv4, m), F.from_int(binom_mod_p(p, m, (q - 1) / 2)));
        if (outer == 0) continue;
        long long j0 = detail::mod_pos(qy.l - 1 + m, step);
        long long i0 = detail::mod_pos(-2 * m, step);
        for (long long j = j0; 2 * j < kk; j += step) {
            PolyA jpart = PolyA::zero(F);
            long long istart = i0 == 0 ? step : i0;
            for (long long i = istart; i < kk - 2 * j; i += step) {
                int mu = multinom_mod_p(p, i, j, kk - 2 * j - i);
                if (mu == 0) continue;
                jpart = jpart + PolyA::monomial(F, i, F.from_int(mu));
            }
            if (jpart.is_zero()) continue;
            int sc = outer;
            if ((j + sign_half) % 2 == 1) sc = F.neg(sc);
            out = out + (jpart * pow_poly(pn, j)).scaled(sc);
        }
    }
    return out;
}

// Trace reduced mod prime^m (m <= n): only ordinary classes contribute, and
// the recurrence runs modulo prime^m so it stays small.  For weights >= 4
// the non-ordinary contributions are divisible by prime^n; weight 3 is the
// one case where they can survive mod prime^m, so stick to k >= 4 here.
inline PolyA trace_mod_pn(const TraceQuery& qy, int m, const TraceOptions& opts = {}) {
    detail::validate_trace_query(qy);
    const FieldDesc& F = *qy.F;
    if (m < 1 || m > qy.n) throw RangeViolation("need 1 <= m <= n");
    int d = qy.prime.deg_int();
    if (static_cast<long long>(qy.n) * d > opts.cap)
        throw CapExceeded("n*deg(prime) exceeds cap " + std::to_string(opts.cap));
    if (!type_compatible(F.q, qy.k, qy.l)) return PolyA::zero(F);
    long long kk = qy.k - 2;
    PolyA modulus = pow_poly(qy.prime, m);
    const Census& C = census(F, qy.prime, qy.n);
    PolyA pn = pow_poly(qy.prime, qy.n);
    PolyA total = PolyA::zero(F);
    for (const IsoCount& row : C.rows) {
        if (row.cls.case_tag != 1) continue;
        if (kk == 0) continue;
        PolyA bp = (pn.scaled(row.cls.b)) % modulus;  // = 0 when m <= n, kept general
        PolyA a = row.cls.a % modulus;
        PolyA h0 = PolyA::constant(F, 1);
        PolyA h1 = a;
        for (long long i = 2; i <= kk; ++i) {
            PolyA h2 = (a * h1 - bp * h0) % modulus;
            h0 = std::move(h1);
            h1 = std::move(h2);
        }
        // eps term is divisible by prime^n, hence 0 mod prime^m
        int scalar = F.mul(F.from_int(row.count),
                           F.pow(row.cls.b, detail::mod_pos(qy.l - kk - 1, F.q - 1)));
        total = (total + h1.scaled(scalar)) % modulus;
    }
    return total;
}

namespace detail {

// The symmetry residual around weight p^m + 1, evaluated from the census:
// sum of count * a^{p^m} * b^{l-N-p^m} * h_{N-1}(a, b prime^n).
inline PolyA symmetry_eps(const FieldDesc& F, const PolyA& prime, int n, long long l,
                          long long pm, long long N) {
    const Census& C = census(F, prime, n);
    PolyA pn = pow_poly(prime, n);
    PolyA total = PolyA::zero(F);
    for (const IsoCount& row : C.rows) {
        PolyA bp = pn.scaled(row.cls.b);
        PolyA h0 = PolyA::constant(F, 1);
        PolyA h1 = row.cls.a;
        for (long long i = 2; i <= N - 1; ++i) {
            PolyA h2 = row.cls.a * h1 - bp * h0;
            h0 = std::move(h1);
            h1 = std::move(h2);
        }
        const PolyA& h = (N - 1 == 0) ? h0 : h1;
        int scalar = F.mul(F.from_int(row.count),
                           F.pow(row.cls.b, mod_pos(l - N - pm, F.q - 1)));
        total = total + (frobenius_power(row.cls.a, pm) * h).scaled(scalar);
    }
    return total;
}

}  // namespace detail

inline TraceResult trace_auto(const TraceQuery& qy, const TraceOptions& opts = {});

// Checks the symmetry identity around weight p^m + 1 and returns all parts.
struct SymmetryReport {
    long long pm = 0;
    long long N = 0;
    PolyA lhs, mirror, eps, residual;
    bool matched = false;
    std::optional<PolyA> eps_closed_deg1;  // prime = T, n = 1 only
    std::optional<PolyA> eps_q2;           // q = 2 only
};

inline SymmetryReport symmetry_check(const FieldDesc& F, const PolyA& prime, int n, long long l,
                                     int m, long long N, const TraceOptions& opts = {}) {
    if (m < 1) throw RangeViolation("need m >= 1");
    long long pm = 1;
    for (int i = 0; i < m; ++i) pm *= F.p;
    if (N < 1 || N > pm) throw RangeViolation("need 1 <= N <= p^m");

    if (static_cast<long long>(n) * prime.deg_int() > opts.cap)
        throw CapExceeded("n*deg(prime) exceeds cap " + std::to_string(opts.cap));

    SymmetryReport rep;
    rep.pm = pm;
    rep.N = N;
    TraceQuery big{&F, prime, n, pm + 1 + N, l};
    TraceQuery small{&F, prime, n, pm + 1 - N, l - N};
    rep.lhs = trace_auto(big, opts).value;
    rep.mirror = small.k >= 2 ? trace_auto(small, opts).value : PolyA::zero(F);
    rep.eps = detail::symmetry_eps(F, prime, n, l, pm, N);
    rep.residual = rep.lhs - pow_poly(prime, N * n) * rep.mirror - rep.eps;
    rep.matched = rep.residual.is_zero();

    if (prime == PolyA::var(F) && n == 1 && type_compatible(F.q, pm + 1 + N, l)) {
        long long step = F.q == 2 ? 1 : F.q - 1;
        long long j0 = detail::mod_pos(l - 1, step);
        PolyA closed = PolyA::zero(F);
        for (long long j = j0; 2 * j <= N - 1; j += step) {
            int cj = c_kj_mod_p(F.p, N - 1, j);
            if (cj != 0) closed = closed + PolyA::monomial(F, j, F.from_int(cj));
        }
        rep.eps_closed_deg1 = closed;
    }
    if (F.q == 2) {
        PolyA q2 = PolyA::zero(F);
        if (N + 1 >= 3) q2 = trace_char2({&F, prime, n, N + 1, 1});
        if (N % 2 == 1) q2 = q2 + pow_poly(prime, static_cast<long long>(n) * ((N - 1) / 2));
        rep.eps_q2 = q2;
    }
    return rep;
}

// Method dispatch: cheapest valid formula first.
inline TraceResult trace_auto(const TraceQuery& qy, const TraceOptions& opts) {
    detail::validate_trace_query(qy);
    const FieldDesc& F = *qy.F;
    int d = qy.prime.deg_int();
    if (F.p == 2) return {trace_char2(qy), "char2"};
    if (d == 1 && qy.n == 1) return {trace_deg1(qy), "deg1"};
    if (static_cast<long long>(qy.n) * d == 2) return {trace_deg2(qy), "deg2"};
    if (d == 1 && qy.n >= 3) {
        long long pm = F.p;
        while (pm + 1 < qy.k) {
            long long N = qy.k - 1 - pm;
            if (N >= 1 && N <= pm && dim_cusp(F.q, pm + 1 - N, qy.l - N) == 0 &&
                static_cast<long long>(qy.n) * d <= opts.cap) {
                if (!type_compatible(F.q, qy.k, qy.l)) return {PolyA::zero(F), "symmetry"};
                return {detail::symmetry_eps(F, qy.prime, qy.n, qy.l, pm, N), "symmetry"};
            }
            pm *= F.p;
        }
    }
    return {trace_general(qy, opts), "general"};
}

// The rescaled operator is prime^{-1} times the integral Hecke operator, so
// the trace of the n-th power of the integral operator is prime^n times ours.
inline PolyA unscale_trace(const PolyA& value, const PolyA& prime, int n) {
    return value * pow_poly(prime, n);
}

// Interpolating polynomial in X for all prime powers with n*deg = 2 at fixed
// weight and type (odd q): f(prime^n) equals the trace for every such pair.
inline PolyAX interp_poly_nd2(const FieldDesc& F, long long k, long long l) {
    if (F.p == 2) throw EvenCharacteristic("interp_poly_nd2 needs odd characteristic");
    if (k < 2) throw error("weight must be at least 2");
    long long kk = k - 2;
    PolyAX out = PolyAX::zero(F);
    if (kk == 0) return out;
    int q = F.q;

    // B[alpha][t] = sum over units b of (1 - chi(alpha, b)) b^t
    std::vector<std::vector<int>> B(q, std::vector<int>(q - 1, 0));
    for (int alpha = 0; alpha < q; ++alpha)
        for (int t = 0; t < q - 1; ++t) {
            int acc = 0;
            for (int b = 1; b < q; ++b) {
                int w = F.from_int(1 - quadratic_character(F, alpha, b));
                acc = F.add(acc, F.mul(w, F.pow(b, t)));
            }
            B[alpha][t] = acc;
        }

    long long jmax = (kk + 1) / 2 - 1;
    std::vector<PolyA> coeffs(static_cast<size_t>(jmax + 1), PolyA::zero(F));
    // walk j downward so the powers of a grow by a^2 each step
    std::vector<PolyA> apow;
    std::vector<std::pair<int, PolyA>> as;  // (a_T, a) pairs, nonzero a
    for (int a1 = 0; a1 < q; ++a1)
        for (int a0 = 0; a0 < q; ++a0) {
            if (a1 == 0 && a0 == 0) continue;
            PolyA a = PolyA(F, {a0, a1});
            as.emplace_back(a1, a);
            apow.push_back(pow_poly(a, kk - 2 * jmax));
        }
    for (long long j = jmax; j >= 0; --j) {
        int cj = c_kj_mod_p(F.p, kk, j);
        PolyA sum = PolyA::zero(F);
        if (cj != 0) {
            int t = static_cast<int>(detail::mod_pos(j + l - kk - 1, q - 1));
            for (size_t i = 0; i < as.size(); ++i) {
                int w = B[as[i].first][t];
                if (w != 0) sum = sum + apow[i].scaled(w);
            }
            sum = sum.scaled(F.from_int(cj));
        }
        coeffs[static_cast<size_t>(j)] = sum;
        if (j > 0)
            for (size_t i = 0; i < as.size(); ++i) apow[i] = apow[i] * as[i].second * as[i].second;
    }
    return PolyAX(F, std::move(coeffs));
}

enum class SymKind { homogeneous, power };

// Closed forms for the two-variable symmetric functions h_m and p_m of the
// roots of Y^2 - aY + c, reduced mod p.
inline PolyA sym_poly_eval(SymKind kind, long long m, const PolyA& a, const PolyA& c) {
    if (m < 0) throw error("sym_poly_eval needs m >= 0");
    const FieldDesc& F = *a.F;
    if (kind == SymKind::homogeneous) {
        PolyA out = PolyA::zero(F);
        for (long long j = 0; 2 * j < m; ++j) {
            int cj = c_kj_mod_p(F.p, m, j);
            if (cj != 0) out = out + (pow_poly(a, m - 2 * j) * pow_poly(c, j)).scaled(F.from_int(cj));
        }
        if (m % 2 == 0) out = out + pow_poly(-c, m / 2);
        return out;
    }
    if (m == 0) return PolyA::constant(F, F.from_int(2));
    PolyA out = PolyA::zero(F);
    for (long long r2 = 0; 2 * r2 <= m; ++r2) {
        // m/(m-r2) * C(m-r2, r2) = C(m-r2, r2) + C(m-r2-1, r2-1)
        unsigned long long coef = binom_exact(static_cast<int>(m - r2), static_cast<int>(r2));
        if (r2 >= 1) coef += binom_exact(static_cast<int>(m - r2 - 1), static_cast<int>(r2 - 1));
        int cv = static_cast<int>(coef % F.p);
        if (r2 % 2 == 1) cv = (F.p - cv) % F.p;
        if (cv != 0) out = out + (pow_poly(a, m - 2 * r2) * pow_poly(c, r2)).scaled(F.from_int(cv));
    }
    return out;
}

// The same values through the defining recurrences, for cross-checking.
inline PolyA sym_poly_recurrence(SymKind kind, long long m, const PolyA& a, const PolyA& c) {
    if (m < 0) throw error("sym_poly_recurrence needs m >= 0");
    const FieldDesc& F = *a.F;
    PolyA s0 = kind == SymKind::homogeneous ? PolyA::constant(F, 1)
                                            : PolyA::constant(F, F.from_int(2));
    PolyA s1 = a;
    if (m == 0) return s0;
    if (m == 1) return s1;
    for (long long i = 2; i <= m; ++i) {
        PolyA s2 = a * s1 - c * s0;
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    return s1;
}

}  // namespace dmf
