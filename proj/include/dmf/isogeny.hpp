#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "poly.hpp"

namespace dmf {

// An isogeny class of rank-2 Drinfeld modules over F_q[T]/(prime), given by
// the characteristic polynomial X^2 - a X + b prime^n of Frobenius.
//   case 1: ordinary, gcd(a, prime) = 1
//   case 2: supersingular with n odd, a = 0
//   case 3: supersingular with n even, a = lambda prime^{n/2}, constant-field
//           quadratic irreducible (only for deg prime odd)
//   case 4: supersingular with n even, Frobenius in A up to twist (double root)
struct WeilClass {
    PolyA a;
    int b = 1;       // element index of a unit in F_q
    int case_tag = 0;
};

// Presentation of the quadratic function field L = K[Y]/(Y^2 + r Y + s)
// attached to an isogeny class, reduced so that the conductor of A[Y] is
// split off.  For odd q the presentation has r = 0 and s = -D with D the
// squarefree discriminant part (carrying the unit).
struct HyperellipticModel {
    const FieldDesc* F = nullptr;
    bool separable = true;   // false only in even characteristic when r = 0
    bool degenerate = false; // quadratic has a root in A; not a field
    PolyA r, s;
    int genus = 0;           // -1 allowed; meaningless when !separable or degenerate
    PolyA conductor;         // monic
    int chi_inf = 1;         // 1 split, 0 ramified, -1 inert at infinity
};

namespace detail {

// Number of y in E with y^2 + ry + s = 0, for r, s in E.
inline int quad_root_count(const FieldDesc& E, int r, int s) {
    if (E.p != 2) {
        int disc = E.sub(E.mul(r, r), E.mul(E.from_int(4), s));
        if (disc == 0) return 1;
        return E.pow(disc, (E.q - 1) / 2) == 1 ? 2 : 0;
    }
    if (r == 0) return 1;  // unique square root in characteristic 2
    int u = E.mul(s, E.inv(E.mul(r, r)));
    // absolute trace down to F_2
    int total_deg = 0;
    for (int t = E.q; t > 1; t /= 2) ++total_deg;
    int acc = 0, cur = u;
    for (int i = 0; i < total_deg; ++i) {
        acc = E.add(acc, cur);
        cur = E.mul(cur, cur);
    }
    return acc == 0 ? 2 : 0;
}

// Does Y^2 + rY + s have a root in A?  Bounded enumeration; only needed in
// even characteristic where there is no discriminant shortcut.
inline bool has_poly_root(const PolyA& r, const PolyA& s) {
    const FieldDesc& F = *r.F;
    long long bound = 0;
    if (!r.is_zero()) bound = std::max(bound, r.deg().value());
    if (!s.is_zero()) bound = std::max(bound, (s.deg().value() + 1) / 2);
    for (const PolyA& y : enumerate_polys(F, static_cast<int>(bound))) {
        if ((y * y + r * y + s).is_zero()) return true;
    }
    return false;
}

}  // namespace detail

// Builds the reduced model for the quadratic X^2 + c1 X + c0 over A.
inline HyperellipticModel build_model(const FieldDesc& F, const PolyA& c1, const PolyA& c0) {
    HyperellipticModel M;
    M.F = &F;
    M.conductor = PolyA::constant(F, 1);

    if (F.p != 2) {
        PolyA disc = c1 * c1 - PolyA::constant(F, F.from_int(4)) * c0;
        if (disc.is_zero()) {
            M.degenerate = true;
            M.chi_inf = 1;
            return M;
        }
        auto [D, cond] = squarefree_part(disc);
        M.r = PolyA::zero(F);
        M.s = -D;
        M.conductor = cond;
        long long degD = D.is_constant() ? 0 : D.deg().value();
        M.genus = static_cast<int>((degD + 1) / 2) - 1;
        long long top = 2 * (M.genus + 1);
        int lead = D.coeff(top);
        if (lead == 0) {
            M.chi_inf = 0;
        } else {
            M.chi_inf = F.is_square(lead) ? 1 : -1;
        }
        return M;
    }

    // even characteristic
    PolyA r = c1, s = c0;
    if (r.is_zero()) {
        M.separable = false;
        M.r = r;
        M.s = s;
        M.chi_inf = 0;
        M.genus = -1;
        return M;
    }
    if (detail::has_poly_root(r, s)) {
        M.degenerate = true;
        M.chi_inf = 1;
        return M;
    }
    int prev_genus = -1;
    bool have_prev = false;
    while (true) {
        long long dr = r.is_zero() ? 0 : r.deg().value();
        long long ds = s.is_zero() ? 0 : s.deg().value();
        long long top = std::max(2 * dr, ds);
        int genus = static_cast<int>((top + 1) / 2) - 1;
        if (have_prev && genus >= prev_genus)
            throw error("conductor reduction failed to decrease the genus");
        prev_genus = genus;
        have_prev = true;

        PolyA sp = derivative(s), rp = derivative(r);
        PolyA f = gcd_poly(r, sp * sp + s * rp * rp);
        if (f.is_constant()) {
            M.r = r;
            M.s = s;
            M.genus = genus;
            break;
        }
        PolyA fhat = radical(f);
        int m = fhat.deg_int();
        long long e = 1;
        for (int i = 0; i < m; ++i) e *= F.q;
        PolyA l = modpow(s, e / 2, r);
        r = exact_div(r, fhat);
        // r * fhat is the previous r, so this is (s + r_old*l + l^2) / fhat^2
        s = exact_div(s + (r * fhat) * l + l * l, fhat * fhat);
        M.conductor = M.conductor * fhat;
    }
    long long top2 = 2 * (M.genus + 1);
    int rh = M.r.coeff(M.genus + 1);
    int sh = M.s.coeff(top2);
    if (rh == 0) {
        M.chi_inf = 0;
    } else {
        // split iff Y^2 + rh Y + sh has roots in F_q
        M.chi_inf = detail::quad_root_count(F, rh, sh) == 2 ? 1 : -1;
    }
    return M;
}

// Is X^2 + c1 X + c0 the characteristic polynomial of an imaginary quadratic
// extension (inert or ramified at infinity)?  Returns the model as byproduct.
inline std::pair<bool, HyperellipticModel> is_imaginary(const PolyAX& c) {
    if (c.is_zero() || c.deg() != Degree::of(2) || !c.is_monic())
        throw NotDegreeTwo("is_imaginary needs a monic quadratic");
    const FieldDesc& F = *c.F;
    HyperellipticModel M = build_model(F, c.coeff(1), c.coeff(0));
    bool imag = !M.degenerate && (!M.separable || M.chi_inf != 1);
    return {imag, M};
}

// Number of points of the smooth projective curve attached to the model over
// F_{q^j}.
inline long long curve_point_count(const HyperellipticModel& M, int j) {
    if (!M.separable) throw InseparableModel("point count needs a separable model");
    if (M.degenerate || M.genus < 0) throw NegativeGenus("point count needs genus >= 0");
    const FieldDesc& F = *M.F;
    const FieldDesc& E = extension_field(F, j);
    long long count = 0;
    for (int t = 0; t < E.q; ++t) {
        int rv = eval_in(M.r, E, t);
        int sv = eval_in(M.s, E, t);
        count += detail::quad_root_count(E, rv, sv);
    }
    if (M.chi_inf == 1) {
        count += 2;
    } else if (M.chi_inf == 0) {
        count += 1;
    } else {
        count += (j % 2 == 0) ? 2 : 0;
    }
    return count;
}

// Order of the Jacobian over F_q via the zeta function: Newton's identities
// turn the point counts into elementary symmetric functions of the Frobenius
// roots, and the functional equation supplies the upper half.
inline long long jacobian_order(const HyperellipticModel& M) {
    if (!M.separable) throw InseparableModel("jacobian_order needs a separable model");
    if (M.degenerate) throw NegativeGenus("jacobian_order needs a field model");
    int g = M.genus;
    if (g <= 0) return 1;
    const FieldDesc& F = *M.F;
    std::vector<long long> p(g + 1, 0), e(g + 1, 0);
    long long qe = 1;
    for (int j = 1; j <= g; ++j) {
        qe *= F.q;
        p[j] = qe + 1 - curve_point_count(M, j);
    }
    e[0] = 1;
    for (int i = 1; i <= g; ++i) {
        long long acc = 0;
        for (int j = 1; j <= i; ++j) {
            long long term = e[i - j] * p[j];
            acc += (j % 2 == 1) ? term : -term;
        }
        if (acc % i != 0) throw NonIntegralZeta("Newton identity gave a non-integer");
        e[i] = acc / i;
    }
    long long order = 0;
    long long qpow = 1;
    std::vector<long long> qpows(g + 1, 1);
    for (int i = 1; i <= g; ++i) qpows[i] = qpows[i - 1] * F.q;
    for (int i = 0; i < g; ++i) {
        long long term = e[i] * (1 + qpows[g - i]);
        order += (i % 2 == 0) ? term : -term;
    }
    order += (g % 2 == 0) ? e[g] : -e[g];
    if (order <= 0) throw NonIntegralZeta("Jacobian order came out nonpositive");
    return order;
}

// Hurwitz class number H(A[Y]) mod p for the order presented by the model.
inline int hurwitz_mod_p(const HyperellipticModel& M) {
    const FieldDesc& F = *M.F;
    if (M.degenerate || (M.separable && M.chi_inf == 1))
        throw NotImaginary("Hurwitz class number needs an imaginary order");
    if (!M.separable) return 1;

    long long h;
    if (M.genus < 0) {
        h = 1;
    } else {
        h = (1 - M.chi_inf) * jacobian_order(M);
    }
    long long out = h % F.p;

    if (!M.conductor.is_constant()) {
        for (const auto& [pr, mult] : factor_monic(M.conductor).factors) {
            int chi;
            if (F.p != 2) {
                PolyA Dm = (-M.s) % pr;
                if (Dm.is_zero()) {
                    chi = 0;
                } else {
                    long long e = 1;
                    for (int i = 0; i < pr.deg_int(); ++i) e *= F.q;
                    PolyA leg = modpow(-M.s, (e - 1) / 2, pr);
                    if (!leg.is_constant()) throw error("Legendre symbol not constant");
                    chi = leg.coeff(0) == 1 ? 1 : -1;
                }
            } else {
                PolyA rm = M.r % pr;
                if (rm.is_zero()) {
                    chi = 0;
                } else {
                    // absolute trace of s/r^2 in F_q[T]/(pr) down to F_2
                    int d = pr.deg_int();
                    int total_deg = d;
                    for (int t = F.q; t > 2; t /= 2) total_deg += d;
                    auto [g, u, v] = ext_gcd(rm * rm, pr);
                    (void)v;
                    if (!g.is_constant()) throw error("conductor prime divides r twice");
                    PolyA cur = (M.s * u) % pr;
                    PolyA acc = PolyA::zero(F);
                    for (int i = 0; i < total_deg; ++i) {
                        acc = acc + cur;
                        cur = (cur * cur) % pr;
                    }
                    acc = acc % pr;
                    if (acc.is_zero()) {
                        chi = 1;
                    } else if (acc == PolyA::constant(F, 1)) {
                        chi = -1;
                    } else {
                        throw error("Artin-Schreier trace not in F_2");
                    }
                }
            }
            out = (out * ((1 - chi) % F.p + F.p)) % F.p;
        }
    }
    return static_cast<int>(((out % F.p) + F.p) % F.p);
}

// Number of isomorphism classes in the isogeny class, mod p.
inline int iso_count_mod_p(const FieldDesc& F, const PolyA& prime, int n, const WeilClass& cls) {
    int d = prime.deg_int();
    switch (cls.case_tag) {
        case 1:
        case 2: {
            PolyA bp = pow_poly(prime, n).scaled(cls.b);
            HyperellipticModel M = build_model(F, -cls.a, bp);
            return hurwitz_mod_p(M);
        }
        case 3:
            return 2 % F.p;
        case 4: {
            long long qd = 1;
            for (int i = 0; i < d; ++i) qd *= F.q;
            return static_cast<int>(((qd - 1) / (F.q - 1)) % F.p);
        }
        default:
            throw error("unknown isogeny case");
    }
}

// All isogeny classes for (prime, n), ordered by case, then degree of a,
// then lex, then b.
inline std::vector<WeilClass> enumerate_weil(const FieldDesc& F, const PolyA& prime, int n) {
    if (!prime.is_monic()) throw NotMonic("prime must be monic");
    if (!is_irreducible(prime)) throw NotIrreducible("prime must be irreducible");
    if (n < 1) throw error("n must be at least 1");
    int d = prime.deg_int();
    long long nd = static_cast<long long>(n) * d;
    std::vector<WeilClass> out;

    PolyA pn = pow_poly(prime, n);

    // case 1: ordinary classes
    for (const PolyA& a : enumerate_polys(F, static_cast<int>(nd / 2))) {
        if (a.is_zero()) continue;
        if ((a % prime).is_zero()) continue;  // not coprime to the prime
        for (int b = 1; b < F.q; ++b) {
            HyperellipticModel M = build_model(F, -a, pn.scaled(b));
            bool imag = !M.degenerate && (!M.separable || M.chi_inf != 1);
            if (imag) out.push_back({a, b, 1});
        }
    }

    // case 2: n odd, a = 0
    if (n % 2 == 1) {
        for (int b = 1; b < F.q; ++b) {
            HyperellipticModel M = build_model(F, PolyA::zero(F), pn.scaled(b));
            bool imag = !M.degenerate && (!M.separable || M.chi_inf != 1);
            if (imag) out.push_back({PolyA::zero(F), b, 2});
        }
    }

    if (n % 2 == 0) {
        PolyA ph = pow_poly(prime, n / 2);
        // case 3: constant-field quadratic, only when d is odd
        if (d % 2 == 1) {
            for (int lam = 0; lam < F.q; ++lam) {
                for (int b = 1; b < F.q; ++b) {
                    if (detail::quad_root_count(F, F.neg(lam), b) != 0) continue;
                    out.push_back({ph.scaled(lam), b, 3});
                }
            }
        }
        // case 4: double root
        if (F.p != 2) {
            for (int mu = 1; mu < F.q; ++mu) {
                out.push_back({ph.scaled(F.mul(2 % F.p, mu)), F.mul(mu, mu), 4});
            }
        } else {
            for (int b = 1; b < F.q; ++b) {
                out.push_back({PolyA::zero(F), b, 4});
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const WeilClass& x, const WeilClass& y) {
        if (x.case_tag != y.case_tag) return x.case_tag < y.case_tag;
        if (x.a != y.a) return poly_lex_less(x.a, y.a);
        return x.b < y.b;
    });
    return out;
}

struct IsoCount {
    WeilClass cls;
    int count = 0;  // mod p
};

struct Census {
    const FieldDesc* F = nullptr;
    PolyA prime;
    int n = 0;
    std::vector<IsoCount> rows;
};

// Cached census of isomorphism-class counts mod p for all isogeny classes.
inline const Census& census(const FieldDesc& F, const PolyA& prime, int n) {
    static std::map<std::tuple<const FieldDesc*, std::string, int>, std::unique_ptr<Census>> cache;
    static std::mutex mx;
    std::lock_guard<std::mutex> lock(mx);
    auto key = std::make_tuple(&F, prime.str(), n);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto out = std::make_unique<Census>();
    out->F = &F;
    out->prime = prime;
    out->n = n;
    for (const WeilClass& cls : enumerate_weil(F, prime, n)) {
        out->rows.push_back({cls, iso_count_mod_p(F, prime, n, cls)});
    }
    const Census& ref = *out;
    cache.emplace(key, std::move(out));
    return ref;
}

inline std::string census_csv(const Census& C) {
    std::string out = "a,b,case,count_mod_p\n";
    for (const IsoCount& row : C.rows) {
        out += row.cls.a.str();
        out += ",";
        out += C.F->elem_str(row.cls.b);
        out += ",";
        out += std::to_string(row.cls.case_tag);
        out += ",";
        out += std::to_string(row.count);
        out += "\n";
    }
    return out;
}

}  // namespace dmf
