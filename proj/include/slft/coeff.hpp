#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace slft {

using Rational = boost::multiprecision::cpp_rational;

// Exact element of Q(i).
struct CRational {
    Rational re{0};
    Rational im{0};

    CRational() = default;
    CRational(long r) : re(r) {}
    CRational(Rational r) : re(std::move(r)) {}
    CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static CRational i() { return CRational(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    CRational operator-() const { return CRational(-re, -im); }
    CRational conj() const { return CRational(re, -im); }

    CRational &operator+=(const CRational &o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRational &operator-=(const CRational &o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend CRational operator+(CRational a, const CRational &b) { return a += b; }
    friend CRational operator-(CRational a, const CRational &b) { return a -= b; }
    friend CRational operator*(const CRational &a, const CRational &b) {
        return CRational(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend CRational operator/(const CRational &a, const CRational &b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("CRational: division by zero");
        return CRational((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }
    friend bool operator==(const CRational &a, const CRational &b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const CRational &a, const CRational &b) { return !(a == b); }
};

std::string to_string(const Rational &r);
std::string to_string(const CRational &c);

// Integer-exponent monomial in named symbols (masses, couplings, contact
// normalization constants). Exponents may be negative; mass denominators
// stay monomial by construction.
struct Monomial {
    std::map<std::string, int> exp;

    bool operator<(const Monomial &o) const { return exp < o.exp; }
    bool operator==(const Monomial &o) const { return exp == o.exp; }

    Monomial operator*(const Monomial &o) const {
        Monomial r = *this;
        for (const auto &[s, e] : o.exp) {
            int v = (r.exp[s] += e);
            if (v == 0) r.exp.erase(s);
        }
        return r;
    }
    Monomial inverse() const {
        Monomial r;
        for (const auto &[s, e] : exp) r.exp[s] = -e;
        return r;
    }
    int degree_in(const std::string &sym) const {
        auto it = exp.find(sym);
        return it == exp.end() ? 0 : it->second;
    }
    bool is_one() const { return exp.empty(); }
};

// Laurent polynomial over Q(i): the exact scalar coefficient field used by
// every symbolic layer. Denominators are monomials in symbols times integers.
class Coeff {
  public:
    std::map<Monomial, CRational> terms;

    Coeff() = default;
    Coeff(long v) {
        if (v != 0) terms[Monomial{}] = CRational(v);
    }
    Coeff(CRational v) {
        if (!v.is_zero()) terms[Monomial{}] = std::move(v);
    }
    Coeff(Rational v) : Coeff(CRational(std::move(v))) {}

    static Coeff symbol(const std::string &s, int power = 1) {
        Coeff c;
        Monomial m;
        if (power != 0) m.exp[s] = power;
        c.terms[m] = CRational(1);
        return c;
    }
    static Coeff i() { return Coeff(CRational::i()); }

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const {
        return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_one());
    }
    bool is_monomial() const { return terms.size() == 1; }

    CRational constant_part() const {
        auto it = terms.find(Monomial{});
        return it == terms.end() ? CRational() : it->second;
    }

    Coeff operator-() const {
        Coeff r;
        for (auto &[m, c] : terms) r.terms[m] = -c;
        return r;
    }
    Coeff conj() const {
        Coeff r;
        for (auto &[m, c] : terms) r.terms[m] = c.conj();
        return r;
    }
    Coeff &operator+=(const Coeff &o) {
        for (const auto &[m, c] : o.terms) {
            auto it = terms.find(m);
            if (it == terms.end()) {
                terms[m] = c;
            } else {
                it->second += c;
                if (it->second.is_zero()) terms.erase(it);
            }
        }
        return *this;
    }
    Coeff &operator-=(const Coeff &o) { return *this += -o; }
    friend Coeff operator+(Coeff a, const Coeff &b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff &b) { return a -= b; }
    friend Coeff operator*(const Coeff &a, const Coeff &b) {
        Coeff r;
        for (const auto &[ma, ca] : a.terms)
            for (const auto &[mb, cb] : b.terms) {
                Monomial m = ma * mb;
                auto it = r.terms.find(m);
                CRational v = ca * cb;
                if (it == r.terms.end()) {
                    if (!v.is_zero()) r.terms[m] = v;
                } else {
                    it->second += v;
                    if (it->second.is_zero()) r.terms.erase(it);
                }
            }
        return r;
    }
    Coeff &operator*=(const Coeff &o) { return *this = *this * o; }

    // Exact division by a monomial coefficient.
    Coeff div_monomial(const Coeff &mono) const {
        if (!mono.is_monomial()) throw std::domain_error("Coeff: divisor not a monomial");
        const auto &[m, c] = *mono.terms.begin();
        Coeff r;
        Monomial minv = m.inverse();
        for (const auto &[tm, tc] : terms) r.terms[tm * minv] = tc / c;
        return r;
    }

    bool operator==(const Coeff &o) const { return terms == o.terms; }
    bool operator!=(const Coeff &o) const { return !(*this == o); }
    bool operator<(const Coeff &o) const;

    // Substitute symbol -> coefficient value (used for m -> 0 limits and
    // plugging solved normalization constants back in). Negative powers of a
    // substituted-to-zero symbol throw.
    Coeff substitute(const std::string &sym, const Coeff &value) const;

    // Degree range of a symbol over all terms; (0,0) for constants/empty.
    std::pair<int, int> degree_range(const std::string &sym) const;

    bool depends_on(const std::string &sym) const;

    // Write as a0 + sum_k a_k * unknown_k with each a_* free of the unknowns.
    // Throws if any unknown appears nonlinearly or in a product of unknowns.
    void collect_linear(const std::vector<std::string> &unknowns, Coeff &a0,
                        std::vector<Coeff> &ak) const;

    std::string str() const;
};

// Field of fractions over Coeff; used transiently by the exact linear solvers.
// Equality is decided by cross-multiplication, no polynomial gcd needed.
struct RatFunc {
    Coeff num;
    Coeff den = Coeff(1);

    RatFunc() = default;
    RatFunc(Coeff n) : num(std::move(n)) {}
    RatFunc(Coeff n, Coeff d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
        reduce_monomial();
    }

    bool is_zero() const { return num.is_zero(); }

    void reduce_monomial();

    RatFunc operator-() const { return RatFunc(-num, den); }
    friend RatFunc operator+(const RatFunc &a, const RatFunc &b) {
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator-(const RatFunc &a, const RatFunc &b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc &a, const RatFunc &b) {
        return RatFunc(a.num * b.num, a.den * b.den);
    }
    friend RatFunc operator/(const RatFunc &a, const RatFunc &b) {
        if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
        return RatFunc(a.num * b.den, a.den * b.num);
    }
    bool operator==(const RatFunc &o) const { return (num * o.den) == (o.num * den); }

    // Succeeds when the denominator reduced to a monomial.
    bool to_coeff(Coeff &out) const;
};

} // namespace slft
