#pragma once

#include <string>
#include <utility>

#include "errors.hpp"
#include "poly.hpp"

namespace dmf {

// An element of K = F_q(T) in canonical form: monic denominator, coprime to
// the numerator.  Zero is stored as 0/1.
struct RationalFn {
    PolyA num;
    PolyA den;

    RationalFn() = default;
    explicit RationalFn(PolyA n) : num(std::move(n)), den(PolyA::constant(*num.F, 1)) {}
    RationalFn(PolyA n, PolyA d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    static RationalFn zero(const FieldDesc& F) { return RationalFn(PolyA::zero(F)); }
    static RationalFn one(const FieldDesc& F) { return RationalFn(PolyA::constant(F, 1)); }

    void normalize() {
        if (den.is_zero()) throw ZeroPolynomial("rational function with zero denominator");
        if (num.is_zero()) {
            den = PolyA::constant(*num.F, 1);
            return;
        }
        PolyA g = gcd_poly(num, den);
        if (g.deg_int() > 0) {
            num = exact_div(num, g);
            den = exact_div(den, g);
        }
        int lc = den.lc();
        if (lc != 1) {
            int inv = num.F->inv(lc);
            num = num.scaled(inv);
            den = den.scaled(inv);
        }
    }

    bool is_zero() const { return num.is_zero(); }
    bool is_integral() const { return den.is_constant() && den.lc() == 1; }

    std::string str() const {
        if (is_integral()) return num.str();
        return "(" + num.str() + ")/(" + den.str() + ")";
    }
};

inline bool operator==(const RationalFn& x, const RationalFn& y) {
    return x.num == y.num && x.den == y.den;
}
inline bool operator!=(const RationalFn& x, const RationalFn& y) { return !(x == y); }

inline RationalFn operator+(const RationalFn& x, const RationalFn& y) {
    return RationalFn(x.num * y.den + y.num * x.den, x.den * y.den);
}
inline RationalFn operator-(const RationalFn& x, const RationalFn& y) {
    return RationalFn(x.num * y.den - y.num * x.den, x.den * y.den);
}
inline RationalFn operator-(const RationalFn& x) {
    RationalFn out = x;
    out.num = -out.num;
    return out;
}
inline RationalFn operator*(const RationalFn& x, const RationalFn& y) {
    return RationalFn(x.num * y.num, x.den * y.den);
}
inline RationalFn operator/(const RationalFn& x, const RationalFn& y) {
    if (y.is_zero()) throw ZeroPolynomial("division by zero rational function");
    return RationalFn(x.num * y.den, x.den * y.num);
}

// v_infinity(f/g) = deg(g) - deg(f); throws on zero input.
inline long long val_inf(const RationalFn& x) {
    if (x.is_zero()) throw ZeroPolynomial("valuation of zero");
    return x.den.deg_int() - x.num.deg_int();
}

// prime-adic valuation; throws on zero input.
inline long long val_prime(const RationalFn& x, const PolyA& prime) {
    if (x.is_zero()) throw ZeroPolynomial("valuation of zero");
    return ord_at(x.num, prime) - ord_at(x.den, prime);
}

}  // namespace dmf
