#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"

namespace dmf {

// Degree of a polynomial, with a dedicated sentinel for deg(0) so that -1 is
// never overloaded with meaning.  Addition absorbs the sentinel.
struct Degree {
    static Degree neg_inf() { return Degree(true, 0); }
    static Degree of(long long d) { return Degree(false, d); }

    bool is_neg_inf() const { return ninf; }
    long long value() const {
        if (ninf) throw error("degree of zero polynomial has no finite value");
        return v;
    }

    Degree operator+(const Degree& o) const {
        if (ninf || o.ninf) return neg_inf();
        return of(v + o.v);
    }
    bool operator==(const Degree& o) const { return ninf == o.ninf && (ninf || v == o.v); }
    bool operator!=(const Degree& o) const { return !(*this == o); }
    bool operator<(const Degree& o) const {
        if (ninf) return !o.ninf;
        if (o.ninf) return false;
        return v < o.v;
    }
    bool operator<=(const Degree& o) const { return *this < o || *this == o; }
    bool operator>(const Degree& o) const { return o < *this; }
    bool operator>=(const Degree& o) const { return o <= *this; }

private:
    Degree(bool n, long long d) : ninf(n), v(d) {}
    bool ninf;
    long long v;
};

// Element of A = F_q[T].  Coefficients ascending, canonical form keeps no
// trailing zeros, so c.empty() <=> zero polynomial.
struct PolyA {
    const FieldDesc* F = nullptr;
    std::vector<int> c;

    PolyA() = default;
    explicit PolyA(const FieldDesc& field) : F(&field) {}
    PolyA(const FieldDesc& field, std::vector<int> coeffs) : F(&field), c(std::move(coeffs)) { trim(); }

    static PolyA zero(const FieldDesc& field) { return PolyA(field); }
    static PolyA constant(const FieldDesc& field, int v) {
        PolyA out(field);
        if (v != 0) out.c = {v};
        return out;
    }
    static PolyA var(const FieldDesc& field) { return PolyA(field, {0, 1}); }
    static PolyA monomial(const FieldDesc& field, long long e, int coef = 1) {
        PolyA out(field);
        if (coef != 0) {
            out.c.assign(static_cast<size_t>(e) + 1, 0);
            out.c.back() = coef;
        }
        return out;
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    Degree deg() const { return c.empty() ? Degree::neg_inf() : Degree::of(static_cast<long long>(c.size()) - 1); }
    int deg_int() const {  // finite degree; throws on zero
        return static_cast<int>(deg().value());
    }
    int lc() const { return c.empty() ? 0 : c.back(); }
    int coeff(long long i) const {
        if (i < 0 || i >= static_cast<long long>(c.size())) return 0;
        return c[static_cast<size_t>(i)];
    }
    bool is_monic() const { return lc() == 1; }
    bool is_constant() const { return c.size() <= 1; }

    bool operator==(const PolyA& o) const { return F == o.F && c == o.c; }
    bool operator!=(const PolyA& o) const { return !(*this == o); }

    PolyA operator+(const PolyA& o) const {
        check_field(o);
        PolyA out(*F);
        out.c.resize(std::max(c.size(), o.c.size()), 0);
        for (size_t i = 0; i < out.c.size(); ++i)
            out.c[i] = F->add(i < c.size() ? c[i] : 0, i < o.c.size() ? o.c[i] : 0);
        out.trim();
        return out;
    }
    PolyA operator-(const PolyA& o) const {
        check_field(o);
        PolyA out(*F);
        out.c.resize(std::max(c.size(), o.c.size()), 0);
        for (size_t i = 0; i < out.c.size(); ++i)
            out.c[i] = F->sub(i < c.size() ? c[i] : 0, i < o.c.size() ? o.c[i] : 0);
        out.trim();
        return out;
    }
    PolyA operator-() const {
        PolyA out(*this);
        for (int& x : out.c) x = F->neg(x);
        return out;
    }
    PolyA operator*(const PolyA& o) const {
        check_field(o);
        PolyA out(*F);
        if (is_zero() || o.is_zero()) return out;
        out.c.assign(c.size() + o.c.size() - 1, 0);
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            for (size_t j = 0; j < o.c.size(); ++j)
                out.c[i + j] = F->add(out.c[i + j], F->mul(c[i], o.c[j]));
        }
        return out;
    }
    PolyA scaled(int s) const {
        PolyA out(*F);
        if (s == 0) return out;
        out.c = c;
        for (int& x : out.c) x = F->mul(x, s);
        return out;
    }
    PolyA shifted(long long e) const {  // multiply by T^e
        if (is_zero() || e == 0) return *this;
        PolyA out(*F);
        out.c.assign(c.size() + static_cast<size_t>(e), 0);
        std::copy(c.begin(), c.end(), out.c.begin() + static_cast<size_t>(e));
        return out;
    }

    // evaluation at a point of F itself
    int eval(int x) const {
        int acc = 0;
        for (size_t i = c.size(); i-- > 0;) acc = F->add(F->mul(acc, x), c[i]);
        return acc;
    }

    std::string str() const;

private:
    void check_field(const PolyA& o) const {
        if (F != o.F) throw error("mixed fields in polynomial arithmetic");
    }
};

inline std::pair<PolyA, PolyA> divrem(const PolyA& a, const PolyA& b) {
    if (b.is_zero()) throw ZeroPolynomial("division by zero polynomial");
    const FieldDesc& F = *a.F;
    if (a.F != b.F) throw error("mixed fields in division");
    PolyA r = a;
    PolyA q(F);
    if (a.c.size() < b.c.size()) return {q, r};
    q.c.assign(a.c.size() - b.c.size() + 1, 0);
    int binv = F.inv(b.lc());
    for (size_t i = a.c.size(); i-- >= b.c.size();) {
        if (i >= r.c.size() || r.c[i] == 0) {
            if (i == 0) break;
            continue;
        }
        int f = F.mul(r.c[i], binv);
        size_t shift = i - (b.c.size() - 1);
        q.c[shift] = f;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[shift + j] = F.sub(r.c[shift + j], F.mul(f, b.c[j]));
        if (i == 0) break;
    }
    q.trim();
    r.trim();
    return {q, r};
}

inline PolyA operator/(const PolyA& a, const PolyA& b) { return divrem(a, b).first; }
inline PolyA operator%(const PolyA& a, const PolyA& b) { return divrem(a, b).second; }

inline PolyA exact_div(const PolyA& a, const PolyA& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw error("division was not exact");
    return q;
}

inline bool divides(const PolyA& b, const PolyA& a) { return (a % b).is_zero(); }

inline PolyA monic_of(const PolyA& f) {
    if (f.is_zero()) return f;
    return f.scaled(f.F->inv(f.lc()));
}

inline PolyA gcd_poly(PolyA a, PolyA b) {
    while (!b.is_zero()) {
        PolyA r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return monic_of(a);
}

// g, u, v with g = gcd (monic) and u*a + v*b = g
inline std::tuple<PolyA, PolyA, PolyA> ext_gcd(const PolyA& a, const PolyA& b) {
    const FieldDesc& F = *a.F;
    PolyA r0 = a, r1 = b;
    PolyA u0 = PolyA::constant(F, 1), u1 = PolyA::zero(F);
    PolyA v0 = PolyA::zero(F), v1 = PolyA::constant(F, 1);
    while (!r1.is_zero()) {
        auto [q, r2] = divrem(r0, r1);
        PolyA u2 = u0 - q * u1;
        PolyA v2 = v0 - q * v1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (r0.is_zero()) return {r0, u0, v0};
    int s = F.inv(r0.lc());
    return {r0.scaled(s), u0.scaled(s), v0.scaled(s)};
}

inline PolyA derivative(const PolyA& f) {
    const FieldDesc& F = *f.F;
    PolyA out(F);
    if (f.c.size() <= 1) return out;
    out.c.assign(f.c.size() - 1, 0);
    for (size_t i = 1; i < f.c.size(); ++i) {
        int m = static_cast<int>(i % F.p);
        out.c[i - 1] = F.mul(f.c[i], m);
    }
    out.trim();
    return out;
}

inline PolyA pow_poly(const PolyA& f, long long e) {
    if (e < 0) throw error("negative polynomial power");
    PolyA out = PolyA::constant(*f.F, 1);
    PolyA base = f;
    while (e > 0) {
        if (e & 1) out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

inline PolyA modpow(const PolyA& b, long long e, const PolyA& m) {
    if (e < 0) throw error("negative exponent in modpow");
    PolyA out = PolyA::constant(*b.F, 1) % m;
    PolyA base = b % m;
    while (e > 0) {
        if (e & 1) out = (out * base) % m;
        base = (base * base) % m;
        e >>= 1;
    }
    return out;
}

// f(T)^s for s a power of the characteristic: the Frobenius acts on the
// coefficients and stretches exponents, no multiplication needed.
inline PolyA frobenius_power(const PolyA& f, long long s) {
    const FieldDesc& F = *f.F;
    PolyA out(F);
    if (f.is_zero()) return out;
    out.c.assign((f.c.size() - 1) * static_cast<size_t>(s) + 1, 0);
    for (size_t i = 0; i < f.c.size(); ++i)
        if (f.c[i] != 0) out.c[i * static_cast<size_t>(s)] = F.pow(f.c[i], s);
    return out;
}

// Evaluation of f at a point of an extension E of the coefficient field.
inline int eval_in(const PolyA& f, const FieldDesc& E, int x) {
    if (f.F == &E) return f.eval(x);
    const std::vector<int>& emb = embed_table(*f.F, E);
    int acc = 0;
    for (size_t i = f.c.size(); i-- > 0;) acc = E.add(E.mul(acc, x), emb[f.c[i]]);
    return acc;
}

// Order of polynomials used everywhere a deterministic listing is needed:
// by degree first, then coefficient tuples compared from the top power down.
inline bool poly_lex_less(const PolyA& a, const PolyA& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    if (a.is_zero()) return false;
    for (size_t i = a.c.size(); i-- > 0;) {
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    }
    return false;
}

// All polynomials of degree <= max_deg (including 0), in the canonical order.
inline std::vector<PolyA> enumerate_polys(const FieldDesc& F, int max_deg) {
    if (max_deg < 0) throw error("enumerate_polys needs max_deg >= 0");
    std::vector<PolyA> out;
    long long total = 1;
    for (int i = 0; i <= max_deg; ++i) total *= F.q;
    out.reserve(static_cast<size_t>(total));
    out.push_back(PolyA::zero(F));
    for (int d = 0; d <= max_deg; ++d) {
        long long lower = 1;
        for (int i = 0; i < d; ++i) lower *= F.q;
        for (int lead = 1; lead < F.q; ++lead) {
            for (long long idx = 0; idx < lower; ++idx) {
                std::vector<int> coeffs(d + 1, 0);
                long long t = idx;
                for (int i = 0; i < d; ++i) {
                    coeffs[i] = static_cast<int>(t % F.q);
                    t /= F.q;
                }
                coeffs[d] = lead;
                out.emplace_back(F, std::move(coeffs));
            }
        }
    }
    return out;
}

namespace detail {
inline bool irreducible_impl(const PolyA& f, int depth);
}

// Cached list of the monic irreducibles of exact degree d, canonical order.
inline const std::vector<PolyA>& monic_irreducibles(const FieldDesc& F, int d) {
    static std::map<std::pair<const FieldDesc*, int>, std::unique_ptr<std::vector<PolyA>>> cache;
    // recursive: building degree d tests divisibility by the lists of lower degree
    static std::recursive_mutex mx;
    std::lock_guard<std::recursive_mutex> lock(mx);
    auto key = std::make_pair(&F, d);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto list = std::make_unique<std::vector<PolyA>>();
    if (d >= 1) {
        long long lower = 1;
        for (int i = 0; i < d; ++i) lower *= F.q;
        for (long long idx = 0; idx < lower; ++idx) {
            std::vector<int> coeffs(d + 1, 0);
            long long t = idx;
            for (int i = 0; i < d; ++i) {
                coeffs[i] = static_cast<int>(t % F.q);
                t /= F.q;
            }
            coeffs[d] = 1;
            PolyA f(F, std::move(coeffs));
            if (detail::irreducible_impl(f, 0)) list->push_back(std::move(f));
        }
    }
    const std::vector<PolyA>& ref = *list;
    cache.emplace(key, std::move(list));
    return ref;
}

namespace detail {
inline bool irreducible_impl(const PolyA& f, int) {
    if (f.is_zero() || f.is_constant()) return false;
    int d = f.deg_int();
    if (d == 1) return true;
    PolyA g = monic_of(f);
    for (int e = 1; 2 * e <= d; ++e) {
        // monic_irreducibles recursion only ever asks about degrees < d
        for (const PolyA& h : monic_irreducibles(*f.F, e))
            if ((g % h).is_zero()) return false;
    }
    return true;
}
}  // namespace detail

inline bool is_irreducible(const PolyA& f) { return detail::irreducible_impl(f, 0); }

struct Factorization {
    int unit = 1;                                 // leading coefficient of the input
    std::vector<std::pair<PolyA, int>> factors;   // monic irreducible, multiplicity
};

inline Factorization factor_monic(const PolyA& f);

// p-th root of a polynomial that is a p-th power (all exponents divisible by
// p); coefficient roots exist uniquely since Frobenius is bijective.
inline PolyA pth_root(const PolyA& f) {
    const FieldDesc& F = *f.F;
    PolyA out(F);
    if (f.is_zero()) return out;
    out.c.assign((f.c.size() - 1) / F.p + 1, 0);
    long long root_exp = 1;
    for (int i = 0; i < F.r - 1; ++i) root_exp *= F.p;  // inverse of Frobenius
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (f.c[i] == 0) continue;
        if (i % F.p != 0) throw error("polynomial is not a p-th power");
        out.c[i / F.p] = F.pow(f.c[i], root_exp);
    }
    return out;
}

// Squarefree factorization in characteristic p: pairwise coprime monic
// squarefree parts with multiplicities, product g_i^{m_i} = monic input.
inline std::vector<std::pair<PolyA, int>> squarefree_decomposition(const PolyA& input) {
    if (input.is_zero()) throw ZeroPolynomial("squarefree decomposition of zero");
    const FieldDesc& F = *input.F;
    std::vector<std::pair<PolyA, int>> out;
    PolyA f = monic_of(input);
    int multiplier = 1;
    while (!f.is_constant()) {
        PolyA fp = derivative(f);
        if (fp.is_zero()) {
            f = pth_root(f);
            multiplier *= F.p;
            continue;
        }
        PolyA c = gcd_poly(f, fp);
        PolyA w = exact_div(f, c);
        int i = 1;
        while (!w.is_constant()) {
            PolyA y = gcd_poly(w, c);
            PolyA z = exact_div(w, y);
            if (!z.is_constant()) out.emplace_back(z, i * multiplier);
            w = std::move(y);
            c = exact_div(c, w);
            ++i;
        }
        f = std::move(c);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return poly_lex_less(a.first, b.first); });
    return out;
}

// Writes f = D * g^2 with D squarefree; D carries the unit of f.  Odd
// characteristic only, where this is the usual discriminant reduction.
inline std::pair<PolyA, PolyA> squarefree_part(const PolyA& f) {
    if (f.is_zero()) throw ZeroPolynomial("squarefree_part of zero");
    const FieldDesc& F = *f.F;
    if (F.p == 2) throw EvenCharacteristic("squarefree_part is for odd characteristic");
    PolyA D = PolyA::constant(F, f.lc());
    PolyA g = PolyA::constant(F, 1);
    for (const auto& [part, mult] : squarefree_decomposition(f)) {
        if (mult % 2 == 1) D = D * part;
        if (mult / 2 > 0) g = g * pow_poly(part, mult / 2);
    }
    return {D, g};
}

// Product of the distinct monic irreducible factors.
inline PolyA radical(const PolyA& f) {
    if (f.is_zero()) throw ZeroPolynomial("radical of zero");
    PolyA out = PolyA::constant(*f.F, 1);
    for (const auto& [part, mult] : squarefree_decomposition(f)) out = out * part;
    return out;
}

namespace detail {

// Splits a monic product of distinct degree-d irreducibles into the factors
// themselves.  A random splitter separates the roots through a gcd: either
// directly, through its half-order power (odd q), or through its Frobenius
// trace down to F_2 (even q).  Each attempt peels off a proper divisor with
// probability about one half.
inline void equal_degree_split(const PolyA& f, int d, std::mt19937& rng,
                               std::vector<PolyA>& out) {
    const FieldDesc& F = *f.F;
    if (f.deg_int() == d) {
        out.push_back(f);
        return;
    }
    std::uniform_int_distribution<int> coeff(0, F.q - 1);
    while (true) {
        std::vector<int> rc(static_cast<size_t>(f.deg_int()), 0);
        for (int& ci : rc) ci = coeff(rng);
        PolyA r(F, std::move(rc));
        if (r.is_zero() || r.is_constant()) continue;
        PolyA u = gcd_poly(f, r);
        if (u.is_constant()) {
            PolyA s(F);
            if (F.p == 2) {
                long long steps = static_cast<long long>(d) * F.r;
                PolyA acc = r % f;
                PolyA cur = acc;
                for (long long i = 1; i < steps; ++i) {
                    cur = (cur * cur) % f;
                    acc = acc + cur;
                }
                s = std::move(acc);
            } else {
                // norm of r down to F_q, computed factor by factor so the
                // exponent never exceeds q
                PolyA nrm = r % f;
                PolyA frob = nrm;
                for (int i = 1; i < d; ++i) {
                    frob = modpow(frob, F.q, f);
                    nrm = (nrm * frob) % f;
                }
                s = modpow(nrm, (static_cast<long long>(F.q) - 1) / 2, f) -
                    PolyA::constant(F, 1);
            }
            u = gcd_poly(f, s);
        }
        if (u.is_constant() || u.deg_int() == f.deg_int()) continue;
        equal_degree_split(u, d, rng, out);
        equal_degree_split(exact_div(f, u), d, rng, out);
        return;
    }
}

}  // namespace detail

// Distinct monic irreducible factors with multiplicities, ordered by degree
// then lex.  The product of the factors times the unit reproduces the input.
// Squarefree decomposition first; inside each squarefree part the degree-d
// factors are collected by a gcd with x^(q^d) - x and then separated by
// equal_degree_split.  The generator seed is fixed so runs are reproducible.
inline Factorization factor_monic(const PolyA& f) {
    if (f.is_zero()) throw ZeroPolynomial("cannot factor the zero polynomial");
    const FieldDesc& F = *f.F;
    Factorization out;
    out.unit = f.lc();
    std::mt19937 rng(0x5eed1e55u);
    const PolyA x = PolyA::var(F);
    for (const auto& [part, mult] : squarefree_decomposition(f)) {
        PolyA rem = part;
        PolyA h = x % rem;
        for (int d = 1; !rem.is_constant() && 2 * d <= rem.deg_int(); ++d) {
            h = modpow(h, F.q, rem);
            PolyA g = gcd_poly(rem, h - x);
            if (g.is_constant()) continue;
            std::vector<PolyA> irr;
            detail::equal_degree_split(g, d, rng, irr);
            for (PolyA& gi : irr) out.factors.emplace_back(std::move(gi), mult);
            rem = exact_div(rem, g);
            h = h % rem;
        }
        if (!rem.is_constant()) out.factors.emplace_back(rem, mult);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return poly_lex_less(a.first, b.first); });
    return out;
}

inline int ord_at(const PolyA& f, const PolyA& prime) {
    if (f.is_zero()) throw ZeroPolynomial("ord of zero polynomial");
    int n = 0;
    PolyA work = f;
    while (true) {
        auto [q, r] = divrem(work, prime);
        if (!r.is_zero()) return n;
        work = q;
        ++n;
    }
}

namespace detail {

inline std::string poly_str_generic(const std::vector<std::pair<long long, std::string>>& terms,
                                    const char* var) {
    // terms: (exponent, coefficient text), nonzero, descending exponent
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& [e, coef] : terms) {
        if (!out.empty()) out += "+";
        bool unit = coef == "1";
        bool needs_parens = coef.find('+') != std::string::npos;
        if (e == 0) {
            out += coef;
        } else {
            if (!unit) {
                out += needs_parens ? "(" + coef + ")" : coef;
                out += "*";
            }
            out += var;
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

}  // namespace detail

inline std::string PolyA::str() const {
    std::vector<std::pair<long long, std::string>> terms;
    for (size_t i = c.size(); i-- > 0;)
        if (c[i] != 0) terms.emplace_back(static_cast<long long>(i), F->elem_str(c[i]));
    return detail::poly_str_generic(terms, "T");
}

// The defining modulus of F_q over F_p, in the generator symbol x.
inline std::string field_modulus_str(const FieldDesc& F) {
    std::vector<std::pair<long long, std::string>> terms;
    for (size_t i = F.modulus.size(); i-- > 0;)
        if (F.modulus[i] != 0) terms.emplace_back(static_cast<long long>(i), std::to_string(F.modulus[i]));
    return detail::poly_str_generic(terms, "x");
}

// Parses expressions like "T^3+2*T+1", "(x+1)*T^2+x", "T-1".
inline PolyA parse_poly(const FieldDesc& F, const std::string& input) {
    std::string s;
    for (char ch : input)
        if (!isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw error("empty polynomial");
    PolyA out(F);
    size_t pos = 0;
    int sign = 1;
    if (s[0] == '+' || s[0] == '-') {
        sign = s[0] == '-' ? -1 : 1;
        pos = 1;
    }
    while (pos < s.size()) {
        // find end of term: next top-level + or -
        int depth = 0;
        size_t end = pos;
        while (end < s.size()) {
            char ch = s[end];
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (depth == 0 && (ch == '+' || ch == '-')) break;
            ++end;
        }
        std::string term = s.substr(pos, end - pos);
        if (term.empty()) throw error("malformed polynomial: " + input);

        // locate a top-level T
        size_t tpos = std::string::npos;
        depth = 0;
        for (size_t i = 0; i < term.size(); ++i) {
            if (term[i] == '(') ++depth;
            if (term[i] == ')') --depth;
            if (depth == 0 && term[i] == 'T') {
                tpos = i;
                break;
            }
        }
        int coef;
        long long expo = 0;
        if (tpos == std::string::npos) {
            std::string body = term;
            if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
                body = body.substr(1, body.size() - 2);
            coef = F.parse_elem(body);
        } else {
            std::string pre = term.substr(0, tpos);
            if (!pre.empty()) {
                if (pre.back() != '*') throw error("malformed polynomial: " + input);
                pre.pop_back();
                if (pre.size() >= 2 && pre.front() == '(' && pre.back() == ')')
                    pre = pre.substr(1, pre.size() - 2);
                coef = F.parse_elem(pre);
            } else {
                coef = 1;
            }
            std::string post = term.substr(tpos + 1);
            if (post.empty()) {
                expo = 1;
            } else if (post[0] == '^') {
                expo = std::stoll(post.substr(1));
            } else {
                throw error("malformed polynomial: " + input);
            }
        }
        if (sign < 0) coef = F.neg(coef);
        if (coef != 0) {
            if (expo >= static_cast<long long>(out.c.size())) out.c.resize(expo + 1, 0);
            out.c[static_cast<size_t>(expo)] = F.add(out.c[static_cast<size_t>(expo)], coef);
        }
        pos = end;
        if (pos < s.size()) {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        }
    }
    out.trim();
    return out;
}

// Polynomials in X with coefficients in A = F_q[T].
struct PolyAX {
    const FieldDesc* F = nullptr;
    std::vector<PolyA> c;  // ascending in X, canonical (no zero leading coeffs)

    PolyAX() = default;
    explicit PolyAX(const FieldDesc& field) : F(&field) {}
    PolyAX(const FieldDesc& field, std::vector<PolyA> coeffs) : F(&field), c(std::move(coeffs)) { trim(); }

    static PolyAX zero(const FieldDesc& field) { return PolyAX(field); }
    static PolyAX constant(const FieldDesc& field, PolyA a) {
        PolyAX out(field);
        if (!a.is_zero()) out.c = {std::move(a)};
        return out;
    }
    static PolyAX monomial(const FieldDesc& field, long long e, PolyA coef) {
        PolyAX out(field);
        if (!coef.is_zero()) {
            out.c.assign(static_cast<size_t>(e) + 1, PolyA::zero(field));
            out.c.back() = std::move(coef);
        }
        return out;
    }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    Degree deg() const { return c.empty() ? Degree::neg_inf() : Degree::of(static_cast<long long>(c.size()) - 1); }
    int deg_int() const { return static_cast<int>(deg().value()); }
    const PolyA& lc() const {
        if (c.empty()) throw ZeroPolynomial("leading coefficient of zero");
        return c.back();
    }
    PolyA coeff(long long i) const {
        if (i < 0 || i >= static_cast<long long>(c.size())) return PolyA::zero(*F);
        return c[static_cast<size_t>(i)];
    }
    bool is_monic() const { return !c.empty() && c.back() == PolyA::constant(*F, 1); }

    bool operator==(const PolyAX& o) const { return F == o.F && c == o.c; }
    bool operator!=(const PolyAX& o) const { return !(*this == o); }

    PolyAX operator+(const PolyAX& o) const {
        PolyAX out(*F);
        size_t n = std::max(c.size(), o.c.size());
        out.c.assign(n, PolyA::zero(*F));
        for (size_t i = 0; i < n; ++i) {
            if (i < c.size()) out.c[i] = out.c[i] + c[i];
            if (i < o.c.size()) out.c[i] = out.c[i] + o.c[i];
        }
        out.trim();
        return out;
    }
    PolyAX operator-(const PolyAX& o) const {
        PolyAX out(*F);
        size_t n = std::max(c.size(), o.c.size());
        out.c.assign(n, PolyA::zero(*F));
        for (size_t i = 0; i < n; ++i) {
            if (i < c.size()) out.c[i] = out.c[i] + c[i];
            if (i < o.c.size()) out.c[i] = out.c[i] - o.c[i];
        }
        out.trim();
        return out;
    }
    PolyAX operator*(const PolyAX& o) const {
        PolyAX out(*F);
        if (is_zero() || o.is_zero()) return out;
        out.c.assign(c.size() + o.c.size() - 1, PolyA::zero(*F));
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            for (size_t j = 0; j < o.c.size(); ++j)
                out.c[i + j] = out.c[i + j] + c[i] * o.c[j];
        }
        return out;
    }
    PolyAX scaled(const PolyA& s) const {
        PolyAX out(*F);
        if (s.is_zero()) return out;
        out.c = c;
        for (PolyA& x : out.c) x = x * s;
        return out;
    }

    PolyA eval(const PolyA& x) const {
        PolyA acc = PolyA::zero(*F);
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    std::string str() const {
        std::vector<std::pair<long long, std::string>> terms;
        for (size_t i = c.size(); i-- > 0;)
            if (!c[i].is_zero()) terms.emplace_back(static_cast<long long>(i), c[i].str());
        return detail::poly_str_generic(terms, "X");
    }
};

}  // namespace dmf
