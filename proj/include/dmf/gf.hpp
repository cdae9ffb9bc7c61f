#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"

namespace dmf {

namespace detail {

inline bool is_prime_int(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Little helpers on F_p coefficient vectors (ascending powers), used to
// validate and search field moduli before any field tables exist.

inline void fp_trim(std::vector<int>& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::vector<int> fp_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    fp_trim(c);
    return c;
}

// Remainder of a by monic b.
inline std::vector<int> fp_rem(std::vector<int> a, const std::vector<int>& b, int p) {
    fp_trim(a);
    while (a.size() >= b.size()) {
        int c = a.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) {
            a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        }
        fp_trim(a);
    }
    return a;
}

inline bool fp_irreducible(const std::vector<int>& f, int p) {
    int d = static_cast<int>(f.size()) - 1;
    if (d < 1) return false;
    if (d == 1) return true;
    // trial division by every monic polynomial of degree 1..d/2
    for (int e = 1; 2 * e <= d; ++e) {
        long long count = 1;
        for (int i = 0; i < e; ++i) count *= p;
        for (long long idx = 0; idx < count; ++idx) {
            std::vector<int> g(e + 1, 0);
            long long t = idx;
            for (int i = 0; i < e; ++i) {
                g[i] = static_cast<int>(t % p);
                t /= p;
            }
            g[e] = 1;
            if (fp_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

// Lexicographically smallest monic irreducible of degree r over F_p, where
// polynomials of equal degree compare by coefficient tuples read from the
// highest power downward.
inline std::vector<int> fp_default_modulus(int p, int r) {
    if (r == 1) return {0, 1};  // x
    long long count = 1;
    for (int i = 0; i < r; ++i) count *= p;
    for (long long idx = 0; idx < count; ++idx) {
        std::vector<int> f(r + 1, 0);
        // digits of idx, most significant first, give the coefficient tuple
        // (c_{r-1},...,c_0), so ascending idx enumerates in lex order
        long long t = idx;
        for (int i = 0; i < r; ++i) {
            f[i] = static_cast<int>(t % p);
            t /= p;
        }
        f[r] = 1;
        if (fp_irreducible(f, p)) return f;
    }
    throw error("no irreducible modulus found");  // unreachable
}

}  // namespace detail

// A finite field F_q, q = p^r, with element indices 0..q-1.  The index of an
// element encodes its coordinates in the power basis of x: index v has
// coefficient of x^i equal to the i-th base-p digit of v.  Constants 0..p-1
// therefore keep their usual values.
struct FieldDesc {
    int p = 0;
    int r = 0;
    int q = 0;
    std::vector<int> modulus;  // ascending coefficients over F_p, monic, degree r

    int add(int a, int b) const {
        if (r == 1) return (a + b) % p;
        int out = 0, unit = 1;
        for (int i = 0; i < r; ++i) {
            int da = (a / unit) % p, db = (b / unit) % p;
            out += ((da + db) % p) * unit;
            unit *= p;
        }
        return out;
    }

    int neg(int a) const {
        if (r == 1) return (p - a) % p;
        int out = 0, unit = 1;
        for (int i = 0; i < r; ++i) {
            int da = (a / unit) % p;
            out += ((p - da) % p) * unit;
            unit *= p;
        }
        return out;
    }

    int sub(int a, int b) const { return add(a, neg(b)); }

    int mul(int a, int b) const {
        if (r == 1) return (a * b) % p;
        return mul_t[static_cast<size_t>(a) * q + b];
    }

    int inv(int a) const {
        if (a == 0) throw error("division by zero in F_q");
        return inv_t[a];
    }

    int div(int a, int b) const { return mul(a, inv(b)); }

    int pow(int a, long long e) const {
        if (e < 0) {
            a = inv(a);
            e = -e;
        }
        if (a == 0) return e == 0 ? 1 : 0;
        e %= (q - 1);
        int out = 1, base = a;
        while (e > 0) {
            if (e & 1) out = mul(out, base);
            base = mul(base, base);
            e >>= 1;
        }
        return out;
    }

    int from_int(long long c) const { return static_cast<int>(((c % p) + p) % p); }

    int frob(int a) const { return pow(a, p); }

    bool is_square(int a) const {
        if (p == 2) return true;
        if (a == 0) return true;
        return pow(a, (q - 1) / 2) == 1;
    }

    int sqrt_elem(int a) const {
        for (int y = 0; y < q; ++y)
            if (mul(y, y) == a) return y;
        return -1;
    }

    std::string elem_str(int v) const {
        if (v < p) return std::to_string(v);
        std::string out;
        for (int i = r - 1; i >= 0; --i) {
            int unit = 1;
            for (int j = 0; j < i; ++j) unit *= p;
            int d = (v / unit) % p;
            if (d == 0) continue;
            if (!out.empty()) out += "+";
            if (i == 0) {
                out += std::to_string(d);
            } else {
                if (d != 1) out += std::to_string(d) + "*";
                out += "x";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

    int parse_elem(const std::string& s) const;

    // internal tables, filled by field_create
    std::vector<int16_t> mul_t;  // only populated when r >= 2
    std::vector<int16_t> inv_t;
};

namespace detail {

inline void build_tables(FieldDesc& F) {
    if (F.r >= 2) {
        if (static_cast<long long>(F.q) * F.q > (1LL << 27))
            throw error("field too large for table-based arithmetic");
        F.mul_t.assign(static_cast<size_t>(F.q) * F.q, 0);
        std::vector<int> da(F.r), db(F.r);
        for (int a = 0; a < F.q; ++a) {
            int t = a;
            for (int i = 0; i < F.r; ++i) {
                da[i] = t % F.p;
                t /= F.p;
            }
            for (int b = a; b < F.q; ++b) {
                t = b;
                for (int i = 0; i < F.r; ++i) {
                    db[i] = t % F.p;
                    t /= F.p;
                }
                std::vector<int> prod(2 * F.r - 1, 0);
                for (int i = 0; i < F.r; ++i) {
                    if (da[i] == 0) continue;
                    for (int j = 0; j < F.r; ++j)
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % F.p;
                }
                std::vector<int> rem = fp_rem(prod, F.modulus, F.p);
                int v = 0, unit = 1;
                for (size_t i = 0; i < rem.size(); ++i) {
                    v += rem[i] * unit;
                    unit *= F.p;
                }
                F.mul_t[static_cast<size_t>(a) * F.q + b] = static_cast<int16_t>(v);
                F.mul_t[static_cast<size_t>(b) * F.q + a] = static_cast<int16_t>(v);
            }
        }
    }
    F.inv_t.assign(F.q, 0);
    for (int a = 1; a < F.q; ++a) {
        if (F.inv_t[a] != 0) continue;
        for (int b = a; b < F.q; ++b) {
            if (F.mul(a, b) == 1) {
                F.inv_t[a] = static_cast<int16_t>(b);
                F.inv_t[b] = static_cast<int16_t>(a);
                break;
            }
        }
        if (F.inv_t[a] == 0) throw error("inverse not found; modulus not irreducible?");
    }
}

// Parses an element string like "x^2+2*x+1" into ascending F_p digits.
inline std::vector<int> parse_elem_digits(const std::string& input, int p, int r) {
    std::string s;
    for (char c : input)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw error("empty field element");
    std::vector<int> digits(std::max(r, 1), 0);
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find('+', pos);
        std::string term = s.substr(pos, next == std::string::npos ? next : next - pos);
        pos = next == std::string::npos ? s.size() : next + 1;
        if (term.empty()) throw error("malformed field element: " + input);
        long long coef = 1;
        int expo = 0;
        size_t xpos = term.find('x');
        if (xpos == std::string::npos) {
            coef = std::stoll(term);
        } else {
            std::string pre = term.substr(0, xpos);
            if (!pre.empty()) {
                if (pre.back() == '*') pre.pop_back();
                if (!pre.empty()) coef = std::stoll(pre);
            }
            std::string post = term.substr(xpos + 1);
            if (post.empty()) {
                expo = 1;
            } else if (post[0] == '^') {
                expo = std::stoi(post.substr(1));
            } else {
                throw error("malformed field element: " + input);
            }
        }
        if (expo >= static_cast<int>(digits.size())) digits.resize(expo + 1, 0);
        digits[expo] = static_cast<int>(((digits[expo] + coef) % p + p) % p);
    }
    return digits;
}

}  // namespace detail

inline int FieldDesc::parse_elem(const std::string& s) const {
    std::vector<int> digits = detail::parse_elem_digits(s, p, r);
    detail::fp_trim(digits);
    if (static_cast<int>(digits.size()) > r)
        throw error("element does not fit in field: " + s);
    int v = 0, unit = 1;
    for (size_t i = 0; i < digits.size(); ++i) {
        v += digits[i] * unit;
        unit *= p;
    }
    return v;
}

// Creates (or returns the cached copy of) F_{p^r}.  With no modulus the
// lexicographically smallest monic irreducible of degree r over F_p is used,
// e.g. x^2+1 for F_9 and plain x for prime fields.
inline const FieldDesc& field_create(int p, int r, std::optional<std::string> modulus_text = std::nullopt) {
    if (!detail::is_prime_int(p)) throw NonPrimeCharacteristic("characteristic " + std::to_string(p) + " is not prime");
    if (r < 1) throw error("extension degree must be positive");

    std::vector<int> mod_digits;
    if (modulus_text) {
        mod_digits = detail::parse_elem_digits(*modulus_text, p, r);
        detail::fp_trim(mod_digits);
        if (static_cast<int>(mod_digits.size()) != r + 1)
            throw WrongDegree("modulus degree does not equal r");
        if (mod_digits.back() != 1) throw NotMonic("modulus must be monic");
        if (r >= 2 && !detail::fp_irreducible(mod_digits, p))
            throw ReducibleModulus("modulus is reducible over F_p");
    } else {
        mod_digits = detail::fp_default_modulus(p, r);
    }

    std::string key = std::to_string(p) + ":" + std::to_string(r);
    for (int c : mod_digits) key += "," + std::to_string(c);

    static std::map<std::string, std::unique_ptr<FieldDesc>> cache;
    static std::mutex mx;
    std::lock_guard<std::mutex> lock(mx);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto F = std::make_unique<FieldDesc>();
    F->p = p;
    F->r = r;
    long long q = 1;
    for (int i = 0; i < r; ++i) q *= p;
    if (q > (1 << 16)) throw error("field too large");
    F->q = static_cast<int>(q);
    F->modulus = mod_digits;
    detail::build_tables(*F);
    const FieldDesc& ref = *F;
    cache.emplace(key, std::move(F));
    return ref;
}

// F_{q^m} as a field over the same prime, with the default modulus.
inline const FieldDesc& extension_field(const FieldDesc& F, int m) {
    if (m == 1) return F;
    return field_create(F.p, F.r * m);
}

// Embedding table F -> E: table[v] is the image of element v.  The embedding
// sends x to the lex-smallest root of F's modulus in E.
inline const std::vector<int>& embed_table(const FieldDesc& F, const FieldDesc& E) {
    static std::map<std::pair<const FieldDesc*, const FieldDesc*>, std::unique_ptr<std::vector<int>>> cache;
    static std::mutex mx;
    std::lock_guard<std::mutex> lock(mx);
    auto key = std::make_pair(&F, &E);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    if (E.p != F.p || E.r % F.r != 0) throw error("not an extension");
    int root = -1;
    for (int y = 0; y < E.q && root < 0; ++y) {
        // evaluate F.modulus at y inside E (coefficients are prime-field constants)
        int acc = 0;
        for (int i = static_cast<int>(F.modulus.size()) - 1; i >= 0; --i)
            acc = E.add(E.mul(acc, y), F.modulus[i]);
        if (acc == 0) root = y;
    }
    if (root < 0) throw error("modulus has no root in extension");
    auto table = std::make_unique<std::vector<int>>(F.q, 0);
    for (int v = 0; v < F.q; ++v) {
        int acc = 0, t = v;
        std::vector<int> digits(F.r);
        for (int i = 0; i < F.r; ++i) {
            digits[i] = t % F.p;
            t /= F.p;
        }
        for (int i = F.r - 1; i >= 0; --i) acc = E.add(E.mul(acc, root), digits[i]);
        (*table)[v] = acc;
    }
    const std::vector<int>& ref = *table;
    cache.emplace(key, std::move(table));
    return ref;
}

// Norm from F_{q^m} down to F_q: lambda^(1+q+...+q^{m-1}).
inline int norm_to_base(const FieldDesc& F, const FieldDesc& E, int a) {
    if (E.p != F.p || E.r % F.r != 0) throw error("not an extension");
    if (a == 0) return 0;
    long long e = (static_cast<long long>(E.q) - 1) / (F.q - 1);
    int n = E.pow(a, e);
    const std::vector<int>& emb = embed_table(F, E);
    for (int v = 0; v < F.q; ++v)
        if (emb[v] == n) return v;
    throw error("norm not in base field");
}

// Legendre-style character of the quadratic X^2 + alpha X + beta over F_q
// (odd q): 1 split, 0 double root, -1 irreducible, decided by disc^((q-1)/2).
inline int quadratic_character(const FieldDesc& F, int alpha, int beta) {
    if (F.p == 2) throw EvenCharacteristic("quadratic_character needs odd characteristic");
    int disc = F.sub(F.mul(alpha, alpha), F.mul(F.from_int(4), beta));
    if (disc == 0) return 0;
    return F.pow(disc, (F.q - 1) / 2) == 1 ? 1 : -1;
}

}  // namespace dmf
